from .events import event_bus

_signal_count = 0  # a simple auto increment counter for generating signal ids.


class SignalSupport:
    """
    give every instance its own copies of the class-level signals, so that
    connecting to `planner_a.step_committed` does not fire for `planner_b`.
    """
    
    def __init__(self):
        for k, v in self.__class__.__dict__.items():
            if k.endswith('ed'):
                if isinstance(v, signal):
                    self.__dict__[k] = signal(*v.annotations)


# noinspection PyPep8Naming
class signal:
    """
    code of conduct:
        signal naming convention:
            -   use snake case.
            -   use passive tense. (i.e. the name ends with 'ed', for example
                'node_processed', 'step_committed'.)
                notice:
                    this is a MANDATORY format. names which are not
                    'ed'-ended are not detected by `SignalSupport`, all
                    instances would then share one signal.
    
    usage:
        class Planner(SignalSupport):
            step_committed = signal(StepDiagnostics)
        
        planner = Planner()
        planner.step_committed.connect(lambda diag: print(diag.j))
    """
    _annotations: tuple
    _id: int
    
    def __init__(self, *annotations):
        global _signal_count
        _signal_count += 1
        self._annotations = annotations
        self._id = _signal_count
    
    @property
    def annotations(self) -> tuple:
        return self._annotations
    
    def connect(self, callback):
        if isinstance(callback, signal):
            event_bus.subscribe(self._id, callback.emit)
        else:
            event_bus.subscribe(self._id, callback)
    
    def disconnect(self, callback):
        if isinstance(callback, signal):
            event_bus.unsubscribe(self._id, callback.emit)
        else:
            event_bus.unsubscribe(self._id, callback)
    
    def emit(self, *args, **kwargs):
        event_bus.broadcast(self._id, *args, **kwargs)


# -----------------------------------------------------------------------------
# global signal
# this would be friendly to simple use cases.

def listen(name, callback):
    event_bus.subscribe(f'global#{name}', callback)


def emit(name, *args, **kwargs):
    event_bus.broadcast(f'global#{name}', *args, **kwargs)
