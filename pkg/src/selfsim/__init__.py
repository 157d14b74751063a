"""Groups acting by transducers: evaluation, word/order/orbit problems,
counter-machine compilers, contraction, and Wang-tile translations."""

from .action import (
    Ray,
    Verdict3,
    WordProblemAnswer,
    act_ray,
    act_word,
    is_fixed_ray,
    state_at,
    word_problem_bounded,
    word_problem_fs,
)
from .compilers import (
    Compilation,
    compile_order,
    compile_orbit,
    compile_wp,
    make_uniform_witness,
)
from .contraction import (
    NucleusReport,
    auxiliary_transducers,
    contractify,
    is_nuclear,
    nucleus,
    nuclearize,
    path_contraction_bound,
)
from .documents import (
    DocumentError,
    MachineDocument,
    TransducerDocument,
    parse_machine,
    parse_transducer,
    serialize_machine,
    serialize_transducer,
)
from .minsky import (
    Config,
    GuardViolation,
    Instruction,
    MinskyMachine,
    RunResult,
    normalize,
    run,
    step,
)
from .order import (
    ClassGraph,
    CycleCertificate,
    CycleDecomposition,
    OrderResult,
    class_graph,
    cycle_decomposition,
    order,
    orbit_size_ray,
    same_class,
)
from .tiling import (
    Tileset,
    TilesetCheck,
    WangTile,
    check_tileset_property,
    forced_rows,
    periodicity_probe,
    tileset_from_transducer,
)
from .transducer import (
    ASYNCHRONOUS,
    FINITE_STATE,
    Alphabet,
    Report,
    Transducer,
    compose,
    expand_alphabet,
)
from .words import GroupWord, StateSet, commutator
from . import zoo

__all__ = [
    "ASYNCHRONOUS",
    "Alphabet",
    "ClassGraph",
    "Compilation",
    "Config",
    "CycleCertificate",
    "CycleDecomposition",
    "DocumentError",
    "FINITE_STATE",
    "GroupWord",
    "GuardViolation",
    "Instruction",
    "MachineDocument",
    "MinskyMachine",
    "NucleusReport",
    "OrderResult",
    "Ray",
    "Report",
    "RunResult",
    "StateSet",
    "Tileset",
    "TilesetCheck",
    "TransducerDocument",
    "Transducer",
    "Verdict3",
    "WangTile",
    "WordProblemAnswer",
    "act_ray",
    "act_word",
    "auxiliary_transducers",
    "check_tileset_property",
    "class_graph",
    "commutator",
    "compile_order",
    "compile_orbit",
    "compile_wp",
    "compose",
    "contractify",
    "cycle_decomposition",
    "expand_alphabet",
    "forced_rows",
    "is_fixed_ray",
    "is_nuclear",
    "make_uniform_witness",
    "normalize",
    "nuclearize",
    "nucleus",
    "orbit_size_ray",
    "order",
    "parse_machine",
    "parse_transducer",
    "path_contraction_bound",
    "periodicity_probe",
    "run",
    "same_class",
    "serialize_machine",
    "serialize_transducer",
    "state_at",
    "step",
    "tileset_from_transducer",
    "word_problem_bounded",
    "word_problem_fs",
    "zoo",
]
