"""Exact bi-matrix equilibrium toolkit with verified approximation streams.

Two layers:

* an exact layer (``games``, ``algebra``, ``solvers``, ``fourier_motzkin``)
  where payoffs, strategies and all solver output are arbitrary-precision
  rationals compared with zero tolerance, and
* a stream layer (``streams``, ``oracles``, ``reductions``) where reals are
  approximation sequences with a ``2**-i`` convergence guarantee, games are
  named by interleaved entry streams, and the operations that no continuous
  procedure can perform (zero tests, sign selection, robust division) are
  routed through explicit oracle queries answered from exact ground truth.
"""

from .errors import (ArgumentError, ContractError, FormatError, InternalError,
                     UnanswerableError)
from .games import (BiMatrixGame, CorrelatedMatrix, MixedProfile,
                    StreamCorrelated, StreamProfile, enumerate_pure,
                    is_correlated, is_nash, is_pure_equilibrium,
                    solve_nash_bruteforce)
from .streams import (GammaName, NatStream, RealStream, const, decode_gamma,
                      encode_gamma, rdiv, semitest_gt)
from .fourier_motzkin import IneqSystem, SignPattern, fm_solve_exact, fm_solve_stream
from .algebra import (IndexPairing, constant_sum_value, corr_marginal_first,
                      marginal_first, mp_gadget, product_game, profile_product,
                      strategy_product)
from .oracles import (CoverSelectQuery, ExactOracle, MlpoQuery, RdivBatchQuery,
                      SepQuery, exact_answer, run_reduction)
from .solvers import (Reduced2x2, solve_1pure, solve_2x2_table,
                      solve_correlated, solve_nash)

__version__ = "0.1.0"

__all__ = [
    "ArgumentError", "ContractError", "FormatError", "InternalError",
    "UnanswerableError",
    "BiMatrixGame", "CorrelatedMatrix", "MixedProfile", "StreamCorrelated",
    "StreamProfile", "enumerate_pure", "is_correlated", "is_nash",
    "is_pure_equilibrium", "solve_nash_bruteforce",
    "GammaName", "NatStream", "RealStream", "const", "decode_gamma",
    "encode_gamma", "rdiv", "semitest_gt",
    "IneqSystem", "SignPattern", "fm_solve_exact", "fm_solve_stream",
    "IndexPairing", "constant_sum_value", "corr_marginal_first",
    "marginal_first", "mp_gadget", "product_game", "profile_product",
    "strategy_product",
    "CoverSelectQuery", "ExactOracle", "MlpoQuery", "RdivBatchQuery",
    "SepQuery", "exact_answer", "run_reduction",
    "Reduced2x2", "solve_1pure", "solve_2x2_table", "solve_correlated",
    "solve_nash",
    "__version__",
]
