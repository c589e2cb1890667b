"""Priority work queue orchestrating detection across properties.

Tasks are one-per-image, deduplicated so an image is never queued or
processed twice. A drain pops by (priority desc, enqueue order asc); when
the last in-flight task of a property settles, the property is estimated
exactly once, or flagged partial if any of its images still failed
detection.
"""

from __future__ import annotations

import enum
import heapq
import itertools
import threading
import time
from dataclasses import dataclass, field

from .errors import BackendUnavailableError, DamageSearchError
from .store import Store, utcnow_iso

PRIORITY_BACKGROUND = 1
PRIORITY_SEARCH = 10
PRIORITY_OPERATOR = 20


class TaskState(str, enum.Enum):
    QUEUED = "queued"
    RUNNING = "running"
    DONE = "done"
    FAILED = "failed"


@dataclass
class DetectionTask:
    task_id: str
    property_id: str
    image_id: str
    priority: int
    enqueued_at: str
    state: TaskState = TaskState.QUEUED
    attempts: int = 0
    error: str | None = None


@dataclass
class DrainReport:
    executed: list[str] = field(default_factory=list)
    done: int = 0
    failed: int = 0
    rejected_images: int = 0
    assessed_properties: list[str] = field(default_factory=list)
    partial_properties: list[str] = field(default_factory=list)
    estimate_errors: dict[str, str] = field(default_factory=dict)
    class_processing_time: dict[str, float] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return self.done + self.failed


class Scheduler:
    """Thread-safe queue plus worker pool for detection tasks."""

    def __init__(
        self,
        store: Store,
        processor,
        estimator,
        max_retries: int = 2,
        retry_delay: float = 1.0,
    ):
        self.store = store
        self.processor = processor
        self.estimator = estimator
        self.max_retries = max_retries
        self.retry_delay = retry_delay
        self._lock = threading.Lock()
        self._not_empty = threading.Condition(self._lock)
        self._heap: list[tuple[int, int, str]] = []
        self._seq = itertools.count()
        self._task_seq = itertools.count(1)
        self.tasks: dict[str, DetectionTask] = {}
        self._active_images: set[str] = set()
        # observed moving average of processing time per damage class
        self._class_times: dict[str, tuple[float, int]] = {}

    # -- queueing -----------------------------------------------------------

    def enqueue_property(self, property_id: str, priority: int = PRIORITY_BACKGROUND) -> list[str]:
        """One task per undetected image; images already queued or running
        are skipped."""
        undetected = self.store.list_undetected_images(property_id)
        created = []
        with self._lock:
            for meta in undetected:
                if meta.image_id in self._active_images:
                    continue
                task = DetectionTask(
                    task_id=f"task-{next(self._task_seq):06d}",
                    property_id=property_id,
                    image_id=meta.image_id,
                    priority=priority,
                    enqueued_at=utcnow_iso(),
                )
                self.tasks[task.task_id] = task
                self._active_images.add(meta.image_id)
                self._push(task)
                created.append(task.task_id)
            if created:
                self._not_empty.notify_all()
        return created

    def _push(self, task: DetectionTask):
        heapq.heappush(self._heap, (-task.priority, next(self._seq), task.task_id))

    def pending_count(self) -> int:
        with self._lock:
            return len(self._heap)

    def task_counts(self) -> dict[str, int]:
        with self._lock:
            counts = {state.value: 0 for state in TaskState}
            for task in self.tasks.values():
                counts[task.state.value] += 1
        return counts

    # -- draining -----------------------------------------------------------

    def run(self, worker_count: int = 1) -> DrainReport:
        """Drain the queue with a pool of workers and return the report."""
        if worker_count < 1:
            raise ValueError("worker_count must be >= 1")
        report = DrainReport()
        running = {"count": 0}
        settled_properties: set[str] = set()

        def pop_task() -> DetectionTask | None:
            with self._not_empty:
                while True:
                    if self._heap:
                        _, _, task_id = heapq.heappop(self._heap)
                        task = self.tasks[task_id]
                        task.state = TaskState.RUNNING
                        running["count"] += 1
                        return task
                    if running["count"] == 0:
                        self._not_empty.notify_all()
                        return None
                    self._not_empty.wait(timeout=0.05)

        def release(task: DetectionTask, requeue: bool):
            with self._not_empty:
                running["count"] -= 1
                if requeue:
                    task.state = TaskState.QUEUED
                    self._push(task)
                self._not_empty.notify_all()

        def settle(task: DetectionTask):
            """Record a terminal task; the last one for a property triggers
            its estimation (or a partial flag) exactly once per drain."""
            estimate_pid = None
            with self._lock:
                report.executed.append(task.task_id)
                if task.state is TaskState.DONE:
                    report.done += 1
                else:
                    report.failed += 1
                self._active_images.discard(task.image_id)
                pid = task.property_id
                in_flight = any(
                    t.property_id == pid and t.state in (TaskState.QUEUED, TaskState.RUNNING)
                    for t in self.tasks.values()
                )
                if not in_flight and pid not in settled_properties:
                    settled_properties.add(pid)
                    estimate_pid = pid
            if estimate_pid is None:
                return
            if self.store.list_undetected_images(estimate_pid):
                # detection failures left imagery unprocessed; withhold the
                # assessment and flag the property
                self.store.mark_partial(estimate_pid, True)
                with self._lock:
                    report.partial_properties.append(estimate_pid)
                return
            try:
                self.estimator.estimate_property(estimate_pid)
            except DamageSearchError as exc:
                with self._lock:
                    report.estimate_errors[estimate_pid] = str(exc)
                return
            with self._lock:
                report.assessed_properties.append(estimate_pid)

        def worker():
            while True:
                task = pop_task()
                if task is None:
                    return
                try:
                    meta = self.store.get_image(task.image_id)
                    result = self.processor.process(meta)
                    task.attempts += 1
                    task.state = TaskState.DONE
                    with self._lock:
                        if not result.admitted:
                            report.rejected_images += 1
                        for label in result.damage_classes:
                            avg, n = self._class_times.get(label, (0.0, 0))
                            self._class_times[label] = ((avg * n + result.duration) / (n + 1), n + 1)
                    release(task, requeue=False)
                    settle(task)
                except BackendUnavailableError as exc:
                    task.attempts += 1
                    task.error = str(exc)
                    if task.attempts > self.max_retries:
                        task.state = TaskState.FAILED
                        release(task, requeue=False)
                        settle(task)
                    else:
                        time.sleep(self.retry_delay * (2 ** (task.attempts - 1)))
                        release(task, requeue=True)

        threads = [threading.Thread(target=worker, daemon=True) for _ in range(worker_count)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()

        report.class_processing_time = {k: avg for k, (avg, _) in sorted(self._class_times.items())}
        return report
