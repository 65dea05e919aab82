"""Core contracts: deterministic RNG with labeled splits, config round trips."""

import numpy as np
import pytest

from curioreplay import ConfigError, Rng, config_dump, config_load, rng_create

TABLE_DOC = """
[buffer]
size = 20000
fifo_fraction = 0.05

[detector]
window = 600
idle_threshold = 8000
mean_factor = 1.5
"""


class TestRng:
    def test_same_seed_same_stream(self):
        a = rng_create(42).uniform(size=1000)
        b = rng_create(42).uniform(size=1000)
        assert np.array_equal(a, b)

    def test_same_seed_same_integers(self):
        a = rng_create(42).integers(0, 1 << 30, size=1000)
        b = rng_create(42).integers(0, 1 << 30, size=1000)
        assert np.array_equal(a, b)

    def test_labeled_splits_differ(self):
        root = rng_create(7)
        a = root.split("buffer").uniform(size=100)
        b = root.split("learner").uniform(size=100)
        assert not np.array_equal(a, b)

    def test_split_independent_of_creation_order(self):
        r1 = rng_create(7)
        buf_first = r1.split("buffer").uniform(size=50)
        r2 = rng_create(7)
        r2.split("learner").uniform(size=10)  # consume another stream first
        buf_second = r2.split("buffer").uniform(size=50)
        assert np.array_equal(buf_first, buf_second)

    def test_nested_splits_are_addressable(self):
        a = rng_create(3).split("x").split("y").uniform(size=10)
        b = rng_create(3).split("x").split("y").uniform(size=10)
        assert np.array_equal(a, b)

    def test_parent_unaffected_by_splitting(self):
        r1 = rng_create(11)
        direct = r1.uniform(size=20)
        r2 = rng_create(11)
        r2.split("anything")
        assert np.array_equal(direct, r2.uniform(size=20))

    def test_uniform_mean(self):
        # Monte Carlo: mean of 1e6 U(0,1) draws is 0.5 within 0.002
        # (~7 sigma of the binomial-style bound sqrt(1/12)/1000).
        draws = rng_create(123).uniform(size=1_000_000)
        assert abs(float(draws.mean()) - 0.5) < 0.002

    def test_negative_seed_is_accepted(self):
        assert isinstance(Rng(-5).uniform(), float)


class TestConfig:
    def test_document_echoes_values(self):
        cfg = config_load(TABLE_DOC)
        assert cfg.buffer.size == 20000
        assert cfg.buffer.fifo_fraction == 0.05
        assert cfg.detector.window == 600
        assert cfg.detector.idle_threshold == 8000
        assert cfg.detector.mean_factor == 1.5

    def test_defaults_without_optional_sections(self):
        cfg = config_load("")
        assert cfg.buffer.mtr_sub_buffers == 5
        assert cfg.buffer.mtr_promotion_prob == 0.5
        assert cfg.learner.hidden == [256, 256]
        assert cfg.learner.batch_size == 512
        assert cfg.learner.learning_rate == 0.0003
        assert cfg.harness.total_steps == 150000
        assert cfg.buffer.size == 20000
        assert cfg.env.max_steps_per_episode == 200
        assert cfg.schedule.change_steps == [0, 20000, 120000]
        assert cfg.schedule.values == [1.0, 1.4, 1.8]
        assert cfg.curiosity.ensemble_size == 3
        assert cfg.curiosity.weights == [0.0, 1.0, 0.0]
        assert cfg.detector.delta == 1e-6

    def test_fifo_fraction_out_of_range(self):
        with pytest.raises(ConfigError, match="fifo_fraction"):
            config_load("[buffer]\nfifo_fraction = 1.2\n")

    def test_parse_error_has_position(self):
        with pytest.raises(ConfigError, match="parse error"):
            config_load("[buffer\nsize = 3\n")

    def test_unknown_key_is_named(self):
        with pytest.raises(ConfigError, match="buffersize"):
            config_load("[buffer]\nbuffersize = 3\n")

    def test_unknown_section_is_named(self):
        with pytest.raises(ConfigError, match="bufferz"):
            config_load("[bufferz]\nsize = 3\n")

    def test_batch_larger_than_buffer(self):
        with pytest.raises(ConfigError, match="batch_size"):
            config_load("[buffer]\nsize = 100\n[learner]\nbatch_size = 101\n")

    def test_snapshot_outside_run(self):
        with pytest.raises(ConfigError, match="snapshot_steps"):
            config_load("[harness]\ntotal_steps = 10\nsnapshot_steps = [11]\n")

    def test_piecewise_must_start_at_zero(self):
        with pytest.raises(ConfigError, match="change_steps"):
            config_load("[schedule]\nchange_steps = [5, 10]\nvalues = [1.0, 1.4]\n")

    def test_bad_buffer_kind(self):
        with pytest.raises(ConfigError, match="buffer.kind"):
            config_load('[buffer]\nkind = "lru"\n')

    def test_round_trip(self):
        doc = """
[schedule]
kind = "sinusoidal"
param_min = 1.0
param_max = 1.8

[buffer]
kind = "hcb"
size = 4321

[curiosity]
weights = [1.0, 0.0, 0.5]

[harness]
total_steps = 5000
snapshot_steps = [100, 5000]
seed = 99
"""
        cfg = config_load(doc)
        assert config_load(config_dump(cfg)) == cfg

    def test_round_trip_of_defaults(self):
        cfg = config_load("")
        assert config_load(config_dump(cfg)) == cfg
