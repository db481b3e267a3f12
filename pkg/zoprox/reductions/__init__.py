from zoprox.reductions.adapt import adapt_rdct_c, adapt_rdct_nc
from zoprox.reductions.budget import inner_budget
from zoprox.reductions.config import InnerSolver, ReductionConfigC, ReductionConfigNC
from zoprox.reductions.diagnostics import (LedgerMode, StageErrorDiagnostic, TheoremFixture,
                                           estimate_stage_errors, moreau_grad_norm)
