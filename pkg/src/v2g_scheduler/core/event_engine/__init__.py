from .events import event_bus
from .signal import SignalSupport
from .signal import emit
from .signal import listen
from .signal import signal
