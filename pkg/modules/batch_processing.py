"""
Batch processing of independent verification tasks.
Per-pair certifier searches are pure, so they are fanned out over a
thread pool; results come back in input order so reports stay
byte-identical across runs.
"""

import concurrent.futures
import logging
import time
from typing import Callable, List, Optional, Tuple, TypeVar

# Configure logging
logger = logging.getLogger(__name__)

# Type variable for generic return type
T = TypeVar('T')
U = TypeVar('U')

Outcome = Tuple[T, Optional[U], Optional[Exception]]


class BatchProcessor:
    """
    Ordered fan-out over a thread pool.
    """

    def __init__(self, max_workers: int = 4, batch_size: int = 64, timeout: Optional[float] = None):
        """
        Initialize batch processor.

        Args:
            max_workers: Maximum number of concurrent workers
            batch_size: Items handed to the pool at once
            timeout: Timeout for one batch in seconds (None waits forever)
        """
        self.max_workers = max(1, max_workers)
        self.batch_size = max(1, batch_size)
        self.timeout = timeout

    def process_batch(self, items: List[T], process_func: Callable[[T], U]) -> List[Outcome]:
        """
        Process items concurrently; exceptions are captured, never raised.

        Returns:
            List of tuples (item, result, exception), in the order of items
        """
        start_time = time.time()
        results: List[Outcome] = []
        for i in range(0, len(items), self.batch_size):
            results.extend(self._process_chunk(items[i:i + self.batch_size], process_func))
        failed = sum(1 for _, _, error in results if error is not None)
        logger.info(f"Batch processed: {len(items)} items, {failed} failed, {time.time() - start_time:.2f}s")
        return results

    def _process_chunk(self, chunk: List[T], process_func: Callable[[T], U]) -> List[Outcome]:
        if self.max_workers == 1:
            return [self._run_one(process_func, item) for item in chunk]

        slots: List[Optional[Outcome]] = [None] * len(chunk)
        with concurrent.futures.ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            future_to_position = {
                executor.submit(self._run_one, process_func, item): position
                for position, item in enumerate(chunk)
            }
            for future in concurrent.futures.as_completed(future_to_position, timeout=self.timeout):
                slots[future_to_position[future]] = future.result()
        return [slot for slot in slots if slot is not None]

    @staticmethod
    def _run_one(process_func: Callable[[T], U], item: T) -> Outcome:
        try:
            return (item, process_func(item), None)
        except Exception as e:
            logger.warning(f"Error processing item {item!r}: {str(e)}")
            return (item, None, e)
