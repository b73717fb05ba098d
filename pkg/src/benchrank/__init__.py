"""benchrank: run application benchmarks and rank compute backends.

The package has three layers:

* benchmark families (``benchrank.bench``, ``benchrank.qsim``) that generate
  problem instances, solve them with reference solvers and score results
  against exact desk-scale oracles;
* a multi-criteria scoring engine (``benchrank.mcda``, ``benchrank.elicitation``,
  ``benchrank.explanation``) that normalizes raw metrics through elicited
  utility functions, aggregates them with 2-additive Choquet integrals and
  explains comparisons with Shapley contributions;
* a results layer (``benchrank.service``, ``benchrank.cli``) that persists
  benchmark records, ranks alternatives and serves the HTTP API used by the
  browser front-end.
"""

from .errors import ConsistencyError, SolverFailure, ValidationError

__version__ = "0.1.0"

__all__ = ["ConsistencyError", "SolverFailure", "ValidationError", "__version__"]
