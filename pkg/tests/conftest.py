import threading

import pytest

from damagesearch.config import AppConfig, AppContext
from damagesearch.demo import build_demo_corpus
from damagesearch.errors import BackendUnavailableError


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    build_demo_corpus(root)
    return root


def make_context(corpus_dir, store_path) -> AppContext:
    config = AppConfig(store=str(store_path), fixtures=str(corpus_dir / "sidecars"))
    context = AppContext(config)
    with open(corpus_dir / "properties.ndjson", encoding="utf-8") as fp:
        context.store.import_ndjson(fp)
    return context


@pytest.fixture
def ctx(corpus_dir, tmp_path):
    context = make_context(corpus_dir, tmp_path / "store.db")
    yield context
    context.close()


@pytest.fixture
def assessed_ctx(ctx):
    drain_all(ctx)
    return ctx


def drain_all(context, workers: int = 4):
    for pid in sorted({m.property_id for m in context.store.list_undetected_images()}):
        context.scheduler.enqueue_property(pid)
    return context.scheduler.run(worker_count=workers)


class FailingBackend:
    """Detector stub that is always unreachable."""

    def __init__(self):
        self.calls = 0
        self._lock = threading.Lock()

    def detect(self, image_id, image_path=""):
        with self._lock:
            self.calls += 1
        raise BackendUnavailableError("backend down")


class CountingBackend:
    """Wraps a backend and counts detect calls (thread safe)."""

    def __init__(self, inner):
        self.inner = inner
        self.calls = 0
        self._lock = threading.Lock()

    def detect(self, image_id, image_path=""):
        with self._lock:
            self.calls += 1
        return self.inner.detect(image_id, image_path)
