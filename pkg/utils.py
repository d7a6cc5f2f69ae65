import logging
import logging.config
import time
import psutil
from dataclasses import dataclass
from functools import wraps
from typing import Any, Callable, Optional

from config import Config

logger = logging.getLogger(__name__)

def setup_logging(level: str = None):
    """Configure root logging from Config"""
    logging.config.dictConfig(Config.get_logging_config(level))

@dataclass(frozen=True)
class RunMetrics:
    """Wall time and resident memory of one solver call."""

    operation: str
    seconds: float
    rss_before_mb: float
    rss_after_mb: float
    pivots: Optional[int] = None

    @property
    def rss_delta_mb(self) -> float:
        return self.rss_after_mb - self.rss_before_mb

    def describe(self) -> str:
        text = (f"{self.operation}: {self.seconds:.3f}s, "
                f"rss {self.rss_after_mb:.1f} MB ({self.rss_delta_mb:+.1f} MB)")
        if self.pivots is not None:
            text += f", {self.pivots} pivots"
        return text

class PerformanceMonitor:
    """Resident-memory sampling around planning and solving calls"""

    def __init__(self):
        self._process = psutil.Process()

    def rss_mb(self) -> float:
        return self._process.memory_info().rss / 1024 / 1024

    def measure(self, operation: str, func: Callable, *args, **kwargs) -> Any:
        """Run func, log a RunMetrics line at INFO and return func's result"""
        before = self.rss_mb()
        start = time.perf_counter()
        result = None
        try:
            result = func(*args, **kwargs)
            return result
        except Exception as e:
            logger.info(f"{operation} failed after {time.perf_counter() - start:.3f}s: {e}")
            raise
        finally:
            if result is not None:
                metrics = RunMetrics(operation, time.perf_counter() - start, before, self.rss_mb(),
                                     getattr(result, 'pivots', None))
                logger.info(metrics.describe())

def performance_monitor(operation_name: str):
    """Decorator logging duration, memory and pivot count when INFO is enabled"""
    def decorator(func: Callable):
        @wraps(func)
        def wrapper(*args, **kwargs):
            if not logger.isEnabledFor(logging.INFO):
                return func(*args, **kwargs)
            return PerformanceMonitor().measure(operation_name, func, *args, **kwargs)

        return wrapper
    return decorator

def safe_execute(func: Callable[[], int], job: str, failure_code: int = Config.EXIT_PARSE_ERROR) -> int:
    """Run one batch job; a crash becomes a logged failure code instead of aborting the batch"""
    try:
        return func()
    except MemoryError:
        logger.error(f"{job}: out of memory")
    except Exception as e:
        logger.error(f"{job}: unexpected {type(e).__name__}: {e}")
    return failure_code
