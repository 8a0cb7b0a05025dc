"""
simploscore - topology and curvature of musical scores

Notes and chords of a MIDI file become simplices of a simplicial complex,
transitions between consecutive elements become edges. The complex is
described by its Betti numbers, Euler characteristic and Forman-Ricci
curvature, statically or as it evolves over the piece.
"""
from .complex import Simplex, SimplicialComplex, build_complex
from .curvature import curvature_report, forman_p, gauss_bonnet_series, gaussian_vertex
from .evolution import EvolutionConfig, detect_plateaus, normalize_series, run_cumulative, run_sliding
from .fitting import fit_exponential, fit_linear, fit_poly
from .homology import betti_exact, betti_spectral, boundary_matrix, euler_characteristic, hodge_laplacian
from .ingest import assign_measures, parse_midi, read_midi
from .score import chord_root, detect_simultaneities, transition_pairs

__all__ = [
    "Simplex",
    "SimplicialComplex",
    "build_complex",
    "curvature_report",
    "forman_p",
    "gauss_bonnet_series",
    "gaussian_vertex",
    "EvolutionConfig",
    "detect_plateaus",
    "normalize_series",
    "run_cumulative",
    "run_sliding",
    "fit_exponential",
    "fit_linear",
    "fit_poly",
    "betti_exact",
    "betti_spectral",
    "boundary_matrix",
    "euler_characteristic",
    "hodge_laplacian",
    "assign_measures",
    "parse_midi",
    "read_midi",
    "chord_root",
    "detect_simultaneities",
    "transition_pairs",
    ]
