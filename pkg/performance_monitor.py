import time
import logging
import psutil
from collections import defaultdict
from typing import Dict

logger = logging.getLogger(__name__)


class SearchMonitor:
    """Tracks search effort: DFS nodes, property checks, accepted words per length."""

    def __init__(self, enabled: bool = True):
        self.enabled = enabled
        self.reset()

    def reset(self):
        self.nodes = 0
        self.checks = 0
        self.accepted: Dict[int, int] = defaultdict(int)
        self.chunks_done = 0
        self.runs = 0
        self.run_seconds = 0.0
        self.start_time = time.time()
        self._run_started = None

    def start_run(self):
        if not self.enabled:
            return
        self._run_started = time.perf_counter()

    def end_run(self):
        if not self.enabled or self._run_started is None:
            return
        self.run_seconds += time.perf_counter() - self._run_started
        self.runs += 1
        self._run_started = None

    def record_search(self, nodes: int, checks: int):
        if not self.enabled:
            return
        self.nodes += nodes
        self.checks += checks
        self.chunks_done += 1

    def record_accepted(self, length: int, count: int):
        if not self.enabled or not count:
            return
        self.accepted[length] += count

    def get_search_stats(self) -> Dict:
        rate = self.nodes / self.run_seconds if self.run_seconds else 0.0
        return {
            "nodes": self.nodes,
            "property_checks": self.checks,
            "chunks": self.chunks_done,
            "runs": self.runs,
            "run_seconds": round(self.run_seconds, 3),
            "nodes_per_second": round(rate, 1),
            "accepted": {str(n): c for n, c in sorted(self.accepted.items())},
        }

    def get_system_stats(self) -> Dict:
        """Get system resource usage."""
        process = psutil.Process()
        return {
            "cpu_percent": process.cpu_percent(interval=0.1),
            "memory_mb": process.memory_info().rss / 1024 / 1024,
            "threads": process.num_threads(),
        }

    def get_all_metrics(self) -> Dict:
        return {
            "search_stats": self.get_search_stats(),
            "system_stats": self.get_system_stats(),
            "uptime_seconds": time.time() - self.start_time,
        }

    def log_metrics(self):
        if not self.enabled:
            return

        metrics = self.get_all_metrics()
        logger.info(
            f"Search Metrics - "
            f"Nodes: {metrics['search_stats']['nodes']}, "
            f"Checks: {metrics['search_stats']['property_checks']}, "
            f"Rate: {metrics['search_stats']['nodes_per_second']:.0f}/s, "
            f"CPU: {metrics['system_stats']['cpu_percent']:.1f}%, "
            f"Memory: {metrics['system_stats']['memory_mb']:.1f}MB"
        )


# Global instance
perf_monitor = SearchMonitor()
