from dataclasses import dataclass
from typing import Dict, Iterator, Tuple

import numpy as np
from scipy import sparse

from zoprox.objects.errors import InvalidArgumentException


@dataclass(frozen=True)
class Dataset:
    """Binary classification rows.

    :features: CSR matrix of shape (n, d), 0-based columns.
    :labels: int array of 0/1 labels.
    """

    features: sparse.csr_matrix
    labels: np.ndarray

    def __post_init__(self):
        features = sparse.csr_matrix(self.features, dtype=float)
        features.sort_indices()
        labels = np.asarray(self.labels, dtype=np.int64)
        if features.shape[0] != labels.shape[0]:
            raise InvalidArgumentException(
                f"{features.shape[0]} rows but {labels.shape[0]} labels")
        if labels.size and not np.isin(labels, (0, 1)).all():
            raise InvalidArgumentException("Labels must be 0 or 1")
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    def row(self, i: int) -> Dict[int, float]:
        start, end = self.features.indptr[i], self.features.indptr[i + 1]
        return {int(j): float(v) for j, v in zip(self.features.indices[start:end],
                                                 self.features.data[start:end])}

    def rows(self) -> Iterator[Tuple[int, Dict[int, float]]]:
        for i in range(self.n):
            yield int(self.labels[i]), self.row(i)

    def head(self, count: int) -> "Dataset":
        return Dataset(self.features[:count], self.labels[:count])

    @classmethod
    def from_dense(cls, features: np.ndarray, labels: np.ndarray) -> "Dataset":
        return cls(sparse.csr_matrix(np.asarray(features, dtype=float)), labels)
