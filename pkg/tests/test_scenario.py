import logging

import pytest
from hypothesis import given, settings, strategies as st

from evocom.errors import ConfigurationError
from evocom.sampling import DistributionSpec
from evocom.scenario import ScenarioConfig, generate_skeletons

from conftest import scenario


def test_defaults_are_base_configuration():
    cfg = ScenarioConfig(p_in=0.5, p_out=0.05)
    assert (cfg.T, cfg.n_communities, cfg.min_size) == (10, 10, 10)
    assert cfg.size_dist == DistributionSpec.normal(50, 20)
    assert cfg.lifetime_dist == DistributionSpec.truncated_normal(5, 2, 3, 7)
    assert cfg.start_dist == DistributionSpec.uniform(0, 1)
    assert cfg.size_change_dist == DistributionSpec.constant(0)


def test_from_dict_parses_changing_scenario():
    cfg = ScenarioConfig.from_dict({"p_in": 0.5, "p_out": 0.05,
                                    "size_change_dist": {"kind": "normal", "mu": 0, "sigma": 0.2}})
    assert cfg.size_change_dist == DistributionSpec.normal(0, 0.2)


def test_to_dict_round_trip():
    cfg = scenario(0.5, changing=True, migration_chunk=4, name="x")
    assert ScenarioConfig.from_dict(cfg.to_dict()) == cfg


def test_core_ratio_as_distribution():
    cfg = ScenarioConfig.from_dict({"p_in": 0.5, "p_out": 0.05, "core_node_ratio": {"kind": "uniform", "lo": 0.2, "hi": 0.8}})
    ratios = {s.core_ratio for s in generate_skeletons(cfg, 3)}
    assert len(ratios) > 1 and all(0.2 <= r <= 0.8 for r in ratios)


@pytest.mark.parametrize("data,key", [
    ({"p_out": 0.05}, "p_in"),
    ({"p_in": 0.5}, "p_out"),
    ({"p_in": 1.5, "p_out": 0.05}, "p_in"),
    ({"p_in": 0.5, "p_out": 0.05, "T": 0}, "T"),
    ({"p_in": 0.5, "p_out": 0.05, "T": 2.5}, "T"),
    ({"p_in": 0.5, "p_out": 0.05, "colour": 1}, "colour"),
    ({"p_in": 0.5, "p_out": 0.05, "core_node_ratio": 0}, "core_node_ratio"),
    ({"p_in": 0.5, "p_out": 0.05, "size_dist": {"kind": "normal", "mu": 5}}, "size_dist.sigma"),
    ({"p_in": 0.5, "p_out": 0.05, "lifetime_rounding": "up"}, "lifetime_rounding"),
    ({"p_in": 0.5, "p_out": 0.05, "migration_chunk": 0}, "migration_chunk"),
])
def test_config_errors_carry_key_path(data, key):
    with pytest.raises(ConfigurationError) as err:
        ScenarioConfig.from_dict(data)
    assert err.value.key == key
    assert str(err.value).startswith(key)


def test_prefix_is_prepended():
    with pytest.raises(ConfigurationError) as err:
        ScenarioConfig.from_dict({"p_in": 0.5}, prefix="grid[3].")
    assert err.value.key == "grid[3].p_out"


def test_inverted_densities_warn(caplog):
    with caplog.at_level(logging.WARNING):
        ScenarioConfig.from_dict({"p_in": 0.05, "p_out": 0.5})
    assert "p_out" in caplog.text


def test_skeletons_deterministic_and_seed_sensitive():
    cfg = scenario(0.5, changing=True)
    assert generate_skeletons(cfg, 1) == generate_skeletons(cfg, 1)
    assert generate_skeletons(cfg, 1) != generate_skeletons(cfg, 2)


def test_constant_sizes_without_size_change():
    for s in generate_skeletons(scenario(1.0), 9):
        assert len(set(s.target_sizes)) == 1


@given(seed=st.integers(0, 2**63), T=st.integers(1, 15), cnr=st.sampled_from([0.25, 0.5, 1.0]),
       changing=st.booleans())
@settings(max_examples=80, deadline=None)
def test_skeleton_invariants(seed, T, cnr, changing):
    cfg = scenario(cnr, changing=changing, T=T)
    sk = generate_skeletons(cfg, seed)
    assert [s.k for s in sk] == list(range(10))
    for s in sk:
        assert 1 <= s.lifespan <= T
        assert 0 <= s.birth_t <= T - s.lifespan
        assert len(s.target_sizes) == s.lifespan
        assert min(s.target_sizes) >= cfg.min_size


def test_lifespans_follow_truncated_range():
    cfg = scenario(1.0)
    lifespans = [s.lifespan for seed in range(100) for s in generate_skeletons(cfg, seed)]
    assert set(lifespans) <= {3, 4, 5, 6, 7}


def test_birth_is_uniform_over_feasible_steps():
    # lifespan fixed at 4 on T=10 leaves 7 feasible birth steps
    cfg = scenario(1.0, lifetime_dist=DistributionSpec.constant(4))
    births = [s.birth_t for seed in range(300) for s in generate_skeletons(cfg, seed)]
    counts = [births.count(b) for b in range(7)]
    expected = len(births) / 7
    chi2 = sum((c - expected) ** 2 / expected for c in counts)
    assert chi2 < 22.5  # 0.999 quantile of chi-square with 6 dof
