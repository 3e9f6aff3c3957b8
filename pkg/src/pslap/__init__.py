"""Persistent spectral Laplacians of point clouds over alpha-complex filtrations."""

from .alpha import alpha_complex, assign_filtration, critical_alphas, is_gabriel
from .boundary import (
    PersistentBoundary,
    SparseBoundaryMatrix,
    diff_operator,
    full_boundary,
    persistent_boundary,
    restrict,
)
from .dataio import (
    read_pdb_ca,
    read_spectra_csv,
    read_xyz,
    write_curves_svg,
    write_spectra_csv,
    write_spectra_json,
)
from .geometry import (
    Circumsphere,
    PointSet,
    delaunay,
    in_sphere,
    min_circumsphere,
    orientation,
)
from .oracle import Barcode, BettiOracle, betti_from_barcode, exact_rank_betti, reduce
from .simplices import (
    FilteredComplex,
    Simplex,
    Snapshot,
    build_complex,
    euler_characteristic,
    snapshot,
)
from .spectra import (
    PersistentLaplacian,
    SolverPolicy,
    SpectrumRecord,
    accumulated_laplacian_diagonal,
    assemble_laplacian,
    detect_anomalies,
    persistent_laplacian,
    spectrum,
    spectrum_at,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "Barcode",
    "BettiOracle",
    "Circumsphere",
    "FilteredComplex",
    "PersistentBoundary",
    "PersistentLaplacian",
    "PointSet",
    "Simplex",
    "Snapshot",
    "SolverPolicy",
    "SparseBoundaryMatrix",
    "SpectrumRecord",
    "accumulated_laplacian_diagonal",
    "alpha_complex",
    "assemble_laplacian",
    "assign_filtration",
    "betti_from_barcode",
    "build_complex",
    "critical_alphas",
    "delaunay",
    "detect_anomalies",
    "diff_operator",
    "euler_characteristic",
    "exact_rank_betti",
    "full_boundary",
    "in_sphere",
    "is_gabriel",
    "min_circumsphere",
    "orientation",
    "persistent_boundary",
    "persistent_laplacian",
    "read_pdb_ca",
    "read_spectra_csv",
    "read_xyz",
    "reduce",
    "restrict",
    "snapshot",
    "spectrum",
    "spectrum_at",
    "sweep",
    "write_curves_svg",
    "write_spectra_csv",
    "write_spectra_json",
]
