import pytest

from pinnfem.config import ALL_SPACES, load_config, parse_config
from pinnfem.errors import ConfigError
from tests import CONFIG_DATA_DIR


def test_load_full_config():
    config = load_config(f"{CONFIG_DATA_DIR}/p1d.cfg")
    assert config.problem_id == "p1d_poisson"
    assert config.pinn.layers == (1, 8, 1)
    assert config.pinn.lr == 1e-2
    assert config.pinn.epochs_ritz == 0
    assert config.pinn.run_seeds == (3,)
    assert config.fem.spaces == ALL_SPACES
    assert config.fem.mesh_sizes == (4, 8)
    assert config.output.dir == "unused"
    training = config.pinn.training_config(seed=7)
    assert training.seed == 7
    assert training.collocation_count == 32


def test_defaults_by_dimension():
    config = parse_config("[problem]\nid = p3d_poisson\n")
    assert config.pinn.layers == (3, 20, 40, 20, 1)
    assert (config.pinn.epochs_ritz, config.pinn.epochs_residual) == (15000, 10000)
    assert config.pinn.lr == 3e-3
    biharmonic = parse_config("[problem]\nid = p1d_biharmonic\n")
    assert (biharmonic.fem.element, biharmonic.fem.degree) == ("hermite", 3)


def test_overrides():
    config = parse_config("[problem]\nid = p1d_poisson\n[pinn]\nseeds = 0 1 2\n")
    assert config.pinn.run_seeds == (0, 1, 2)
    config = config.with_seed(5).with_output("elsewhere")
    assert config.pinn.run_seeds == (5,)
    assert config.output.dir == "elsewhere"


def test_unknown_problem_names_the_id():
    with pytest.raises(ConfigError, match="p9d_unknown") as err:
        load_config(f"{CONFIG_DATA_DIR}/unknown_problem.cfg")
    assert err.value.line_number == 2


@pytest.mark.parametrize(
    "text,line",
    [
        ("[problem]\nid = p1d_poisson\n[fem]\nmesh_sizes = 10 30\n", 4),
        ("[problem]\nid = p1d_poisson\n[fem]\nmesh_sizes =\n", 4),
        ("[problem]\nid = p1d_poisson\n[pinn]\nlr = fast\n", 4),
        ("[problem]\nid = p1d_poisson\n[pinn]\nboundary_mode = soft\n", 4),
        ("[problem]\nid = p1d_poisson\n\n[fem]\nspace = nodal\n", 5),
        ("[problem]\nid = p1d_poisson\n[fem]\ncolour = red\n", 4),
        ("[problem]\nid = p1d_poisson\n[extra]\nkey = 1\n", 3),
        ("[problem]\nid = p2d_c0\n[pinn]\nlayers = 1 20 1\n", 4),
    ],
)
def test_invalid_values_name_the_line(text, line):
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert err.value.line_number == line


def test_missing_problem():
    with pytest.raises(ConfigError, match="problem"):
        parse_config("[pinn]\nlr = 1e-3\n")


def test_missing_file():
    with pytest.raises(ConfigError, match="not found"):
        load_config(f"{CONFIG_DATA_DIR}/nothing.cfg")


def test_empty_mesh_list_is_rejected_on_use():
    config = parse_config("[problem]\nid = p1d_poisson\n")
    with pytest.raises(ConfigError):
        config.fem.require_mesh_sizes()
