"""Tests for the worker pool helpers"""

import os
import threading

import pytest

from mahler_kernels.utils import workers


class TestThreadLimit:
    def test_unset_uses_cpu_count(self):
        assert workers.thread_limit({}) == (os.cpu_count() or 1)
        limit = workers.thread_limit({workers.THREADS_ENV_VAR: ""})
        assert limit == (os.cpu_count() or 1)

    def test_configured(self):
        assert workers.thread_limit({workers.THREADS_ENV_VAR: "3"}) == 3

    @pytest.mark.parametrize("raw", ["0", "-2", "many"])
    def test_invalid_values_fall_back_to_one(self, raw, caplog):
        assert workers.thread_limit({workers.THREADS_ENV_VAR: raw}) == 1
        assert workers.THREADS_ENV_VAR in caplog.text

    def test_reads_environment(self, monkeypatch):
        monkeypatch.setenv(workers.THREADS_ENV_VAR, "2")
        assert workers.thread_limit() == 2


class TestMapOrdered:
    @pytest.mark.parametrize("threads", [1, 4])
    def test_order_is_kept(self, threads):
        assert workers.map_ordered(lambda x: x * x, list(range(20)), threads) == [
            x * x for x in range(20)
        ]

    def test_uses_several_threads(self):
        seen = set()
        barrier = threading.Barrier(2, timeout=5)

        def task(x):
            seen.add(threading.get_ident())
            barrier.wait()
            return x

        assert workers.map_ordered(task, [1, 2], threads=2) == [1, 2]
        assert len(seen) == 2

    def test_exceptions_propagate(self):
        def task(x):
            if x == 3:
                raise ValueError("bad item")
            return x

        with pytest.raises(ValueError):
            workers.map_ordered(task, list(range(5)), threads=2)
