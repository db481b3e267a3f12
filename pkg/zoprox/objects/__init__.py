"""Function-form access to problems, mirroring the methods on :class:`BlackBoxProblem`."""

import numpy as np

from zoprox.objects.dataset import Dataset
from zoprox.objects.errors import (ConfigException, ConvergenceException,
                                   DivergenceException, InternalZOProxException,
                                   InvalidArgumentException, LibsvmParseException,
                                   MismatchException, OracleException,
                                   UnattainableContractionException,
                                   UnsupportedModeException, ZOProxException)
from zoprox.objects.ledger import QueryBudget, QueryLedger
from zoprox.objects.problem import (BlackBoxProblem, ConvexityTag, ProblemMeta,
                                    QuadraticAugmentation, WhiteBox)
from zoprox.objects.regularizers import (L1, ElasticNet, NoRegularizer, Regularizer,
                                         SquaredL2, grad_mapping, make_regularizer,
                                         prox, prox_step)


def eval_component(problem: BlackBoxProblem, i: int, x: np.ndarray) -> float:
    return problem.eval_component(i, x)


def eval_smooth_avg(problem: BlackBoxProblem, x: np.ndarray) -> float:
    return problem.eval_smooth_avg(x)


def objective(problem: BlackBoxProblem, x: np.ndarray) -> float:
    return problem.objective(x)


def augment_quadratic(problem: BlackBoxProblem, c: float, a: np.ndarray) -> BlackBoxProblem:
    return problem.augment_quadratic(c, a)
