"""Tests for bootstrap committees and their on-disk form."""

import json

import numpy as np
import pytest

from activebn.committee import INDEX_FILE, Committee, build_committee, load_committee, save_committee
from activebn.data.dataset import Dataset, bootstrap_resample
from activebn.disagreement import EstimationMethod, Measure, disagreement
from activebn.exceptions import EmptyDataError, MalformedDocumentError, SchemaMismatchError, ValidationError
from activebn.learning import ScoreConfig, SearchConfig, local_search
from activebn.network import Intervention, forward_sample


@pytest.fixture(scope="module")
def search_config():
    return SearchConfig(restarts=1)


def test_uniform_weights(chain_committee):
    np.testing.assert_allclose(chain_committee.weights, [0.5, 0.5])
    assert len(chain_committee) == 2
    assert chain_committee.arities == (2, 2)


def test_single_member_has_weight_one(chain3_data, search_config):
    committee = build_committee(chain3_data, 1, ScoreConfig(), search_config, np.random.default_rng(0))
    assert committee.size == 1
    np.testing.assert_array_equal(committee.weights, [1.0])


def test_build_is_deterministic(chain3_data, search_config):
    first = build_committee(chain3_data, 3, ScoreConfig(), search_config, np.random.default_rng(4))
    second = build_committee(chain3_data, 3, ScoreConfig(), search_config, np.random.default_rng(4))
    assert first.members == second.members
    np.testing.assert_array_equal(first.weights, second.weights)


def test_members_do_not_depend_on_build_order(chain3_data, search_config):
    committee = build_committee(chain3_data, 3, ScoreConfig(), search_config, np.random.default_rng(9))
    streams = np.random.default_rng(9).spawn(3)
    backwards = [
        local_search(bootstrap_resample(chain3_data, s), ScoreConfig(), search_config, s) for s in reversed(streams)
    ]
    assert tuple(reversed(backwards)) == committee.members

    reordered = Committee.uniform(list(reversed(committee.members)))
    for measure in Measure:
        expected = disagreement(measure, committee, Intervention.empty()).value
        assert disagreement(measure, reordered, Intervention.empty()).value == pytest.approx(expected, abs=1e-12)


def test_large_data_brings_members_together(collider, search_config):
    samples = forward_sample(collider, Intervention.empty(), 5000, np.random.default_rng(13))
    ds = Dataset.from_samples(collider.variables, samples)
    committee = build_committee(ds, 2, ScoreConfig(), search_config, np.random.default_rng(14))
    for measure in Measure:
        estimate = disagreement(measure, committee, Intervention.empty(), EstimationMethod.exact())
        assert estimate.value < 0.01


def test_members_share_the_data_schema(chain3_data, search_config):
    committee = build_committee(chain3_data, 2, ScoreConfig(), search_config, np.random.default_rng(1))
    assert committee.variables == chain3_data.variables
    for member in committee.members:
        assert all(cpt.is_strictly_positive for cpt in member.cpts)


def test_empty_data(chain3, search_config):
    with pytest.raises(EmptyDataError):
        build_committee(Dataset.empty(chain3.variables), 2, ScoreConfig(), search_config, np.random.default_rng(0))


def test_needs_a_member():
    with pytest.raises(ValidationError):
        Committee.uniform([])


def test_schema_mismatch(chain, chain3):
    with pytest.raises(SchemaMismatchError):
        Committee.uniform([chain, chain3])


def test_weights_must_sum_to_one(chain):
    with pytest.raises(ValidationError, match="sum to 1"):
        Committee(members=(chain, chain), weights=np.array([0.5, 0.6]))


def test_save_and_load(chain, chain_committee, tmp_path):
    weighted = Committee(members=chain_committee.members, weights=np.array([0.25, 0.75]))
    index = save_committee(weighted, tmp_path / "committee")
    assert index.name == INDEX_FILE
    assert json.loads(index.read_text())["members"] == ["member_0.json", "member_1.json"]

    loaded = load_committee(tmp_path / "committee")
    assert loaded.members == weighted.members
    np.testing.assert_array_equal(loaded.weights, [0.25, 0.75])


def test_load_missing_index(tmp_path):
    with pytest.raises(MalformedDocumentError, match="Failed to read"):
        load_committee(tmp_path)


def test_load_malformed_index(tmp_path):
    (tmp_path / INDEX_FILE).write_text('{"members": ["member_0.json"]}')
    with pytest.raises(MalformedDocumentError):
        load_committee(tmp_path)
