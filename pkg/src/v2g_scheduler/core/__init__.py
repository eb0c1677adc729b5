from .errors import *
from .event_engine import SignalSupport
from .event_engine import emit
from .event_engine import listen
from .event_engine import signal
from .logger import Logger
from .logger import get_logger
from .logger import log
from .logger import logd
from .logger import loge
from .logger import logw
