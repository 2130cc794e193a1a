# cache.py
from __future__ import annotations

from collections.abc import Sequence
from logging import getLogger

import rwlock
from cachetools import LRUCache

from .gates import DenseUnitary
from .oracles import DistributedQuery, build_query_oracle

logger = getLogger(__name__)

OracleKey = tuple[int, float, str, tuple[int, ...]]


class WriteTransaction:
    def __init__(self, lock: rwlock.RWLock) -> None:
        self._lock = lock

    def __enter__(self) -> None:
        self._lock.writer_lock.acquire()

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:  # type: ignore
        self._lock.writer_lock.release()


class ReadTransaction:
    def __init__(self, lock: rwlock.RWLock) -> None:
        self._lock = lock

    def __enter__(self) -> None:
        self._lock.reader_lock.acquire()

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:  # type: ignore
        self._lock.reader_lock.release()


class OracleCache:
    """Query oracles shared between alignments.

    After the Hamming evolution the query is centred on zero, so one oracle
    serves every read of a given length and gamma. Oracles are immutable;
    the cache itself follows the multiple readers / single writer pattern.
    LRU bookkeeping mutates on every hit, so hits take the write lock while
    plain membership tests only need the read lock.
    """

    __slots__ = ["_lock", "_cache", "hits", "misses"]

    def __init__(self, cache_size: int = 16) -> None:
        self._lock = rwlock.RWLock()
        self._cache: LRUCache[OracleKey, DenseUnitary] = LRUCache(maxsize=cache_size)
        self.hits = 0
        self.misses = 0

    @property
    def read_transaction(self) -> ReadTransaction:
        return ReadTransaction(self._lock)

    @property
    def write_transaction(self) -> WriteTransaction:
        return WriteTransaction(self._lock)

    @staticmethod
    def key(query: DistributedQuery, qubits: Sequence[int]) -> OracleKey:
        return query.d, query.gamma, query.center, tuple(qubits)

    def __contains__(self, key: OracleKey) -> bool:
        with self.read_transaction:
            return key in self._cache

    def __len__(self) -> int:
        with self.read_transaction:
            return len(self._cache)

    def get_query_oracle(
        self, query: DistributedQuery, qubits: Sequence[int]
    ) -> DenseUnitary:
        """Return the cached oracle, building it outside the lock on a miss."""
        key = self.key(query, qubits)
        if key in self:
            with self.write_transaction:
                oracle = self._cache.get(key)
                if oracle is not None:
                    self.hits += 1
                    return oracle

        logger.info("Building query oracle d=%d gamma=%g", query.d, query.gamma)
        oracle = build_query_oracle(query, qubits)
        with self.write_transaction:
            self.misses += 1
            return self._cache.setdefault(key, oracle)

    def clear(self) -> None:
        with self.write_transaction:
            self._cache.clear()
            self.hits = self.misses = 0

    def __repr__(self) -> str:
        return f"<OracleCache: {len(self)} oracles>"


default_cache = OracleCache()
