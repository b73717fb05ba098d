"""Optimization benchmark families: generation, encoding, solving, scoring."""

from .generators import (
    FAMILIES,
    GeneratedInstance,
    bipartite_graph,
    decode_factors,
    encode_factors,
    factorization_problem,
    gen_instance,
    matching_problem,
    maxcut_graph,
)
from .linear import LinearSystem, linear_residual, random_linear_system
from .matching import decode_matching, is_matching, matching_oracle
from .problems import (
    Graph,
    PseudoBooleanProblem,
    Sense,
    cut_size,
    evaluate_solution,
    graph_from_doc,
    graph_to_doc,
    load_graph,
    maxcut_problem,
)
from .qscore import (
    QScoreConfig,
    QScoreResult,
    SizeResult,
    beta_score,
    instance_seed,
    qscore,
)
from .quadratize import default_penalty, project_assignment, quadratize
from .solvers import (
    EXHAUSTIVE_MAX_VARS,
    SolveResult,
    SolverSpec,
    problem_document,
    solve,
    solve_exhaustive,
    solve_external,
    solve_random,
    solve_simulated_annealing,
)

__all__ = [
    "EXHAUSTIVE_MAX_VARS",
    "FAMILIES",
    "GeneratedInstance",
    "Graph",
    "LinearSystem",
    "PseudoBooleanProblem",
    "QScoreConfig",
    "QScoreResult",
    "Sense",
    "SizeResult",
    "SolveResult",
    "SolverSpec",
    "beta_score",
    "bipartite_graph",
    "cut_size",
    "decode_factors",
    "decode_matching",
    "default_penalty",
    "encode_factors",
    "evaluate_solution",
    "factorization_problem",
    "gen_instance",
    "graph_from_doc",
    "graph_to_doc",
    "instance_seed",
    "is_matching",
    "linear_residual",
    "load_graph",
    "matching_oracle",
    "matching_problem",
    "maxcut_graph",
    "maxcut_problem",
    "problem_document",
    "project_assignment",
    "qscore",
    "quadratize",
    "random_linear_system",
    "solve",
    "solve_exhaustive",
    "solve_external",
    "solve_random",
    "solve_simulated_annealing",
]
