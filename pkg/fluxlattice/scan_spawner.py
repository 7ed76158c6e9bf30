import asyncio
import concurrent.futures
import logging
import os
import typing

_lg = logging.getLogger("fluxlattice")


class ScanSpawner:
    """evaluates independent scan points on a pool of worker threads"""
    def __init__(self, required_slots: typing.Optional[int] = None):
        if not isinstance(required_slots, int) or required_slots <= 0:
            self._slot_count = ScanSpawner.available_slots()
        else:
            self._slot_count = min(ScanSpawner.available_slots(), required_slots)
        _lg.debug("ScanSpawner initialized for %s slots", self._slot_count)
        self._active = 0

    @staticmethod
    def available_slots() -> int:
        if hasattr(os, "sched_getaffinity"):
            return len(os.sched_getaffinity(0))
        return os.cpu_count() or 1      # pragma: no cover

    @property
    def slots(self) -> int:
        return self._slot_count

    async def run_points(self, func: typing.Callable, points: typing.Sequence) -> list:
        """
        evaluate func on every point, results in point order
        the model data func closes over is shared read-only between workers
        """
        loop_ = asyncio.get_running_loop()
        self._active += 1
        try:
            with concurrent.futures.ThreadPoolExecutor(max_workers=self._slot_count) as pool_:
                pending_ = [loop_.run_in_executor(pool_, func, p_) for p_ in points]
                _lg.debug("scheduled %d scan points on %d slots", len(pending_), self._slot_count)
                return list(await asyncio.gather(*pending_))
        finally:
            self._active -= 1

    def map(self, func: typing.Callable, points: typing.Sequence) -> list:
        if 1 == self._slot_count or len(points) < 2:
            return [func(p_) for p_ in points]
        return asyncio.run(self.run_points(func, points))

    def running(self) -> bool:
        return self._active > 0
