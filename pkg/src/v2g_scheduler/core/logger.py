from inspect import currentframe
from os import getcwd
from os import getenv
from os.path import relpath
from typing import Optional

from rich.console import Console

__all__ = ['Logger', 'get_logger', 'log', 'logd', 'loge', 'logw']

_LEVELS = {'error': 0, 'warning': 1, 'info': 2, 'debug': 3}
_STYLES = {'error': 'red bold', 'warning': 'yellow', 'info': '', 'debug': 'dim'}


class Logger:
    _cache: list
    _working_dir: str = getcwd()
    
    def __init__(self, level: str = None, console: Console = None):
        """
        args:
            level: literal['error', 'info', 'debug']
                None: read from env var `V2G_LOG`, fallback to 'info'.
                in 'debug' level every line is prefixed with the caller's
                source position (`file:line`).
        """
        self._cache = []
        self._console = console or Console(stderr=True, highlight=False)
        self.set_level(level or getenv('V2G_LOG', 'info'))
    
    @property
    def level(self) -> str:
        return self._level
    
    @property
    def debug(self) -> bool:
        return self._level == 'debug'
    
    def set_level(self, level: str):
        level = level.strip().lower()
        if level not in _LEVELS:
            raise ValueError(
                f'unknown log level: {level!r}, expected one of '
                f'{tuple(x for x in _LEVELS if x != "warning")}'
            )
        self._level = level
    
    def log(self, *args, level='info', frame=None):
        if _LEVELS[level] > _LEVELS[self._level]:
            return
        message = '; '.join(map(str, args)).strip('; ')
        if self.debug:
            if not frame:
                frame = currentframe().f_back
            file_abs = frame.f_globals.get('__file__') \
                       or frame.f_code.co_filename
            file_rel = relpath(file_abs, self._working_dir)
            message = f'{file_rel}:{frame.f_lineno} >> {message}'
        if self._cache and message == self._cache[-1]:
            return
        self._cache.append(message)
        self._console.print(message, style=_STYLES[level] or None,
                            markup=False, soft_wrap=True)
    
    def dump(self, file=''):
        if self._cache:
            from lk_utils import dumps
            from lk_utils.time_utils import timestamp
            dumps('\n'.join(self._cache),
                  file or './log/{}.log'.format(timestamp('ymd-hns')))


_logger = None  # type: Optional[Logger]


def get_logger() -> Logger:
    global _logger
    if _logger is None:
        _logger = Logger()
    return _logger


def log(*args):
    get_logger().log(*args, frame=currentframe().f_back)


def logd(*args):
    get_logger().log(*args, level='debug', frame=currentframe().f_back)


def logw(*args):
    get_logger().log(*args, level='warning', frame=currentframe().f_back)


def loge(*args):
    get_logger().log(*args, level='error', frame=currentframe().f_back)
