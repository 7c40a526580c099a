"""scikit-learn style wrapper around :func:`kdefect.solve`."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .graph import Graph
from .solver import SolverConfig, solve


def check_graph(X) -> Graph:
    """Turn a Graph, a square adjacency array or a sparse adjacency matrix into a Graph.

    Any nonzero off-diagonal entry is an edge; the matrix must be symmetric.
    """
    if isinstance(X, Graph):
        return X
    A = check_array(X, accept_sparse=("csr", "coo", "csc"), ensure_2d=True, dtype=None,
                    ensure_min_samples=1, ensure_min_features=1)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"adjacency matrix must be square, got shape {A.shape}")
    if sp.issparse(A):
        coo = sp.triu(A, k=1).tocoo()
        keep = coo.data != 0
        rows, cols = coo.row[keep], coo.col[keep]
        asym = abs(A - A.T)
        if asym.nnz and asym.max() != 0:
            raise ValueError("adjacency matrix must be symmetric")
    else:
        if not np.array_equal(A, A.T):
            raise ValueError("adjacency matrix must be symmetric")
        rows, cols = np.nonzero(np.triu(A, k=1))
    return Graph.from_edges(A.shape[0], zip(rows.tolist(), cols.tolist()))


class KDefectiveClique(ClusterMixin, BaseEstimator):
    """Finds a maximum k-defective clique of the graph passed to ``fit``.

    Parameters mirror :class:`SolverConfig`.  After fitting, ``labels_`` is 1
    for members of the clique and 0 elsewhere, ``clique_`` lists the member
    ids and ``report_`` holds the full :class:`SolveReport`.
    """

    def __init__(self, k=1, *, bound="double", branching="bs_three", early_termination=True,
                 second_coloring_order="memory", time_limit=None, seed=0):
        self.k = k
        self.bound = bound
        self.branching = branching
        self.early_termination = early_termination
        self.second_coloring_order = second_coloring_order
        self.time_limit = time_limit
        self.seed = seed

    def _config(self) -> SolverConfig:
        return SolverConfig(
            k=self.k,
            bound=self.bound,
            branching=self.branching,
            early_termination=self.early_termination,
            second_coloring_order=self.second_coloring_order,
            time_limit=self.time_limit,
            seed=self.seed,
        )

    def fit(self, X, y=None):
        g = check_graph(X)
        report = solve(g, self._config())
        self.report_ = report
        self.clique_ = np.asarray(report.best.best_vertices, dtype=np.intp)
        labels = np.zeros(g.n, dtype=np.intp)
        labels[self.clique_] = 1
        self.labels_ = labels
        self.n_features_in_ = g.n
        return self

    @property
    def size_(self) -> int:
        check_is_fitted(self, "report_")
        return self.report_.best_size
