"""Transmission-eigenvalue computations on radially layered disks.

Layers, bottom to top:

* ``exactarith`` — exact Gaussian-rational Laurent arithmetic over named
  generators (the substrate for the symbol tables).
* ``parametrix`` — eikonal/transport recursions for the boundary
  Dirichlet-to-Neumann symbol, with exact structure checks.
* ``bessel`` — complex-argument cylinder functions (series + backward
  recurrence), used as the closed-form oracle.
* ``radialode`` — regular radial solutions with lambda-sensitivities,
  overflow-safe rescaling, batch integration.
* ``rootfinder`` — Wronskian zeros by argument principle + Newton.
* ``harness`` — region scans, strip checks, Weyl counting; ``cli`` drives it.
"""
from .bessel import BesselPair, DomainError, bessel_j_pair
from .exactarith import (GaussianRational, Generator, MultiPoly, SymbolExpr,
                         divide_by_rho_monomial, g_h, g_n, g_psi, g_qf, g_qs,
                         g_r, g_z, partial_derivative, ring_ops,
                         substitute_zero)
from .harness import (CalibrationError, CountingResult, RegionScanResult,
                      StripReport, record_weight, scan_free_region,
                      strip_check, weyl_constant, weyl_count)
from .parametrix import (EikonalTable, ParametrixTables, RecursionBugError,
                         Report, TableUnderflowError, TransportTable,
                         c_constant, degree_report, dn_symbol, eikonal_residual,
                         eikonal_table, tilde_tables, transport_residual,
                         transport_table, verify_n_dependence)
from .radialode import (BoundaryData, ContactFamily, RadialProfile, SeedError,
                        StiffnessError, frobenius_seed, regular_solution,
                        regular_solutions)
from .rootfinder import (BoundaryZeroError, Box, DegenerateProblemError,
                         DiskProblem, EigenvalueRecord, SearchResult,
                         UnresolvedBox, find_eigenvalues, mode_cutoff,
                         winding_count, winding_number, wronskian)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
