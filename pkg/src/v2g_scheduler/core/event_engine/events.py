from collections import defaultdict


class EventBus:
    
    def __init__(self):
        self._events = defaultdict(list)
        #   dict[channel, list[callback]], fired in subscription order.
    
    def subscribe(self, channel, callback):
        if callback not in self._events[channel]:
            self._events[channel].append(callback)
    
    def unsubscribe(self, channel, callback):
        if callback in self._events[channel]:
            self._events[channel].remove(callback)
    
    def broadcast(self, channel, *args, **kwargs):
        for callback in tuple(self._events[channel]):
            callback(*args, **kwargs)


event_bus = EventBus()
