"""Tree- and dag-like natural deduction for minimal implicational logic.

The package provides:

* interned implicational formulas and a full propositional language
  (:mod:`mindag.formulas`),
* tree-shaped natural deduction with a repetition rule, local-correctness
  checking, provability checking, leveling, and repetition elimination
  (:mod:`mindag.ndtree`),
* dag-shaped deductions with merged inference nodes, an edge-selector
  function, assumption-set computation, and two independent verifiers
  (:mod:`mindag.nddag`),
* horizontal compression of leveled tree deductions into dags together
  with a certifying pipeline (:mod:`mindag.compress`),
* a contraction-free sequent prover and its translation into tree
  deductions (:mod:`mindag.lm`),
* Hamiltonian-path encodings into the full language, an implicational
  translation with a cubic size bound, and a brute-force satisfiability
  checker (:mod:`mindag.hamilton`),
* JSON and DOT interchange (:mod:`mindag.serialize`) and a benchmark
  report with figures (:mod:`mindag.bench`).
"""

from mindag.formulas import (
    Formula,
    FormulaTable,
    FullFormula,
    FullFormulaTable,
    FormulaError,
    ParseError,
    Sequent,
    atom,
    imp,
    parse_formula,
    parse_full_formula,
    parse_sequent,
    sequent,
    subformulas,
    variables,
    weight,
)
from mindag.ndtree import (
    TreeDeduction,
    TreeError,
    assumption,
    check_tree,
    elim,
    eliminate_repetitions,
    intro,
    is_locally_correct,
    level_tree,
    proves_tree,
    repeat,
    tree_metrics,
)
from mindag.nddag import (
    DagDeduction,
    DagError,
    check_dag,
    compute_af,
    enumerate_f_threads,
    tree_to_dag,
    unfold_dag,
    verify_by_threads,
    verify_dag,
    verify_dag_stats,
)
from mindag.compress import (
    CompressError,
    build_fsp,
    check_coherency,
    compress,
    compress_and_certify,
    extract_f,
    restrict_to_fsp,
)
from mindag.lm import (
    LmError,
    LmProof,
    check_lm,
    prove_lm,
    translate_lm_to_nd,
)
from mindag.hamilton import (
    DiGraph,
    GraphError,
    classical_sat,
    cube_bound_holds,
    encode_alpha,
    hamiltonicity_oracle,
    parse_graph,
    rho_g,
    statman_translate,
)
from mindag.serialize import (
    SerializeError,
    dag_from_json,
    dag_to_dot,
    dag_to_json,
    lm_from_json,
    lm_to_json,
    tree_from_json,
    tree_to_dot,
    tree_to_json,
)

__all__ = [
    "Formula",
    "FormulaTable",
    "FullFormula",
    "FullFormulaTable",
    "FormulaError",
    "ParseError",
    "Sequent",
    "atom",
    "imp",
    "parse_formula",
    "parse_full_formula",
    "parse_sequent",
    "sequent",
    "subformulas",
    "variables",
    "weight",
    "TreeDeduction",
    "TreeError",
    "assumption",
    "check_tree",
    "elim",
    "eliminate_repetitions",
    "intro",
    "is_locally_correct",
    "level_tree",
    "proves_tree",
    "repeat",
    "tree_metrics",
    "DagDeduction",
    "DagError",
    "check_dag",
    "compute_af",
    "enumerate_f_threads",
    "tree_to_dag",
    "unfold_dag",
    "verify_by_threads",
    "verify_dag",
    "verify_dag_stats",
    "CompressError",
    "build_fsp",
    "check_coherency",
    "compress",
    "compress_and_certify",
    "extract_f",
    "restrict_to_fsp",
    "LmError",
    "LmProof",
    "check_lm",
    "prove_lm",
    "translate_lm_to_nd",
    "DiGraph",
    "GraphError",
    "classical_sat",
    "cube_bound_holds",
    "encode_alpha",
    "hamiltonicity_oracle",
    "parse_graph",
    "rho_g",
    "statman_translate",
    "SerializeError",
    "dag_from_json",
    "dag_to_dot",
    "dag_to_json",
    "lm_from_json",
    "lm_to_json",
    "tree_from_json",
    "tree_to_dot",
    "tree_to_json",
]

__version__ = "0.1.0"
