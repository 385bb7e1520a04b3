"""Kloosterman tables over the tower F_q ⊂ F_{q^2} ⊂ ... for a fixed rank."""

from __future__ import annotations

from typing import Protocol

import numpy as np

from .fields import DEFAULT_FIELD_BUDGET, FieldDescriptor, SubfieldEmbedding, build_field, embed_subfield
from .kloosterman import KloostermanTable, kl_table_convolution, kl_table_direct

__all__ = ["KloostermanTower", "TableStore"]


class TableStore(Protocol):
    def load(self, field: FieldDescriptor, n: int, base_a: int, ext_degree: int) -> KloostermanTable | None: ...

    def store(self, table: KloostermanTable, ext_degree: int) -> None: ...


class KloostermanTower:
    """Lazily built tables ``Kl_n(F_{q^m}, .)`` with q = p^a.

    ``method`` selects the table route (``"conv"`` or ``"direct"``).  An
    optional ``store`` persists finished tables between runs.
    """

    def __init__(
        self,
        p: int,
        a: int,
        n: int,
        method: str = "conv",
        budget: int = DEFAULT_FIELD_BUDGET,
        store: TableStore | None = None,
    ):
        if method not in ("conv", "direct"):
            raise ValueError(f"unknown method {method!r}")
        self.p = p
        self.a = a
        self.n = n
        self.method = method
        self.budget = budget
        self.store = store
        self._tables: dict[int, KloostermanTable] = {}
        self._embeddings: dict[tuple[int, int], SubfieldEmbedding] = {}

    @property
    def q(self) -> int:
        return self.p**self.a

    def field(self, m: int) -> FieldDescriptor:
        return build_field(self.p, self.a * m, self.budget)

    def table(self, m: int) -> KloostermanTable:
        if m not in self._tables:
            field = self.field(m)
            table = self.store.load(field, self.n, self.a, m) if self.store else None
            if table is None:
                if self.method == "direct":
                    table = kl_table_direct(field, self.n, self.a)
                else:
                    table = kl_table_convolution(field, self.n, self.a)
                if self.store:
                    self.store.store(table, m)
            self._tables[m] = table
        return self._tables[m]

    def embedding(self, m_small: int, m_big: int) -> SubfieldEmbedding:
        key = (m_small, m_big)
        if key not in self._embeddings:
            self._embeddings[key] = embed_subfield(self.field(m_small), self.field(m_big))
        return self._embeddings[key]

    def values_at(self, m_small: int, indices: np.ndarray, j: int) -> np.ndarray:
        """Coordinates of ``Kl_n(F_{q^(m_small*j)}, iota(x))`` for x given by index in F_{q^m_small}."""
        big = m_small * j
        table = self.table(big)
        if j == 1:
            mapped = np.asarray(indices, dtype=np.int64)
        else:
            mapped = self.embedding(m_small, big).map_indices(indices)
        return table.coords[table.field.log_table[mapped]]
