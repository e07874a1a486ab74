from pinnfem.enrichment import solve_additive, solve_multiplicative
from pinnfem.fem import FunctionSpace, solve_classical
from pinnfem.mesh import interval_mesh, tet_mesh, triangle_mesh
from pinnfem.network import DenseNetwork, init_network
from pinnfem.pinn import get_problem, train
