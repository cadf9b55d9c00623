"""Desk-scale P1 finite elements on planar domains, the ground truth the bounds are compared with."""
from cuspbound.fem.assembly import ScalarField
from cuspbound.fem.bracket import BracketReport, bracket_check
from cuspbound.fem.capacity import (CondenserSpec, Disc, Rect, Ring, annulus_capacity, capacity_p,
                                    capacity_transfer_check)
from cuspbound.fem.eigen import mu2_fem, neumann_eigenpair
from cuspbound.fem.mesh import (TriMesh, load_field, load_mesh, mesh_annulus, mesh_cusp_2d, mesh_disc, mesh_h1,
                                mesh_rectangle, save_field, save_mesh)
from cuspbound.fem.rayleigh import RayleighResult, mup_rayleigh, p_mean
