"""Tests for datasets, bootstrap resampling and the file codecs."""

import json

import numpy as np
import pytest

from activebn.data import (
    Dataset,
    Record,
    bootstrap_resample,
    parse_dataset,
    parse_network,
    read_dataset,
    read_network,
    serialize_dataset,
    serialize_network,
    write_dataset,
    write_network,
)
from activebn.exceptions import (
    ArityMismatchError,
    CyclicGraphError,
    DatasetFormatError,
    EmptyDataError,
    MalformedDocumentError,
    MissingFlagColumnError,
    RowSumError,
    StateOutOfRangeError,
    UnknownColumnError,
)
from activebn.network import Dag, Intervention, Variable, forward_sample, random_parameters

ALARM_ARITIES = {
    "HISTORY": 2, "CVP": 3, "PCWP": 3, "HYPOVOLEMIA": 2, "LVEDVOLUME": 3, "LVFAILURE": 2,
    "STROKEVOLUME": 3, "ERRLOWOUTPUT": 2, "HRBP": 3, "HREKG": 3, "ERRCAUTER": 2, "HRSAT": 3,
    "INSUFFANESTH": 2, "ANAPHYLAXIS": 2, "TPR": 3, "EXPCO2": 4, "KINKEDTUBE": 2, "MINVOL": 4,
    "FIO2": 2, "PVSAT": 3, "SAO2": 3, "PAP": 3, "PULMEMBOLUS": 2, "SHUNT": 2, "INTUBATION": 3,
    "PRESS": 4, "DISCONNECT": 2, "MINVOLSET": 3, "VENTMACH": 4, "VENTTUBE": 4, "VENTLUNG": 4,
    "VENTALV": 4, "ARTCO2": 3, "CATECHOL": 2, "HR": 3, "CO": 3, "BP": 3,
}  # fmt: skip

ALARM_PARENTS = {
    "HISTORY": ["LVFAILURE"],
    "CVP": ["LVEDVOLUME"],
    "PCWP": ["LVEDVOLUME"],
    "LVEDVOLUME": ["HYPOVOLEMIA", "LVFAILURE"],
    "STROKEVOLUME": ["HYPOVOLEMIA", "LVFAILURE"],
    "HRBP": ["ERRLOWOUTPUT", "HR"],
    "HREKG": ["ERRCAUTER", "HR"],
    "HRSAT": ["ERRCAUTER", "HR"],
    "TPR": ["ANAPHYLAXIS"],
    "EXPCO2": ["ARTCO2", "VENTLUNG"],
    "MINVOL": ["INTUBATION", "VENTLUNG"],
    "PVSAT": ["FIO2", "VENTALV"],
    "SAO2": ["PVSAT", "SHUNT"],
    "PAP": ["PULMEMBOLUS"],
    "SHUNT": ["INTUBATION", "PULMEMBOLUS"],
    "PRESS": ["INTUBATION", "KINKEDTUBE", "VENTTUBE"],
    "VENTMACH": ["MINVOLSET"],
    "VENTTUBE": ["DISCONNECT", "VENTMACH"],
    "VENTLUNG": ["INTUBATION", "KINKEDTUBE", "VENTTUBE"],
    "VENTALV": ["INTUBATION", "VENTLUNG"],
    "ARTCO2": ["VENTALV"],
    "CATECHOL": ["ARTCO2", "INSUFFANESTH", "SAO2", "TPR"],
    "HR": ["CATECHOL"],
    "CO": ["HR", "STROKEVOLUME"],
    "BP": ["CO", "TPR"],
}


@pytest.fixture
def chain_doc():
    return {
        "variables": [
            {"name": "A", "states": ["a0", "a1"]},
            {"name": "B", "states": ["b0", "b1"]},
        ],
        "edges": [["A", "B"]],
        "cpts": {"A": [[0.6, 0.4]], "B": [[0.9, 0.1], [0.2, 0.8]]},
    }


class TestRecordAndDataset:
    def test_observed_record_flags_only_query(self):
        record = Record.observed([1, 0, 1], Intervention.of({1: 0}))
        assert record.intervened == (False, True, False)

    def test_append_returns_new_dataset(self, chain):
        ds = Dataset.empty(chain.variables)
        grown = ds.append(Record.observed([1, 1]))
        assert len(ds) == 0
        assert len(grown) == 1
        assert grown[0].values == (1, 1)

    def test_from_samples_flags_whole_columns(self, chain):
        ds = Dataset.from_samples(chain.variables, np.array([[0, 1], [1, 1]]), Intervention.of({1: 1}))
        np.testing.assert_array_equal(ds.intervened, [[False, True], [False, True]])

    def test_arrays_are_read_only(self, chain3_data):
        with pytest.raises(ValueError):
            chain3_data.values[0, 0] = 1

    def test_state_out_of_range(self, chain):
        with pytest.raises(Exception, match="outside"):
            Dataset.from_records(chain.variables, [Record.observed([0, 2])])


class TestBootstrap:
    def test_same_size_and_flags_travel(self, chain):
        records = [Record.observed([0, 0]), Record.observed([1, 1], Intervention.of({0: 1}))]
        ds = Dataset.from_records(chain.variables, records)
        sample = bootstrap_resample(ds, np.random.default_rng(0))
        assert len(sample) == 2
        for record in sample:
            assert record.intervened[0] == (record.values == (1, 1))

    def test_deterministic(self, chain3_data):
        first = bootstrap_resample(chain3_data, np.random.default_rng(5))
        second = bootstrap_resample(chain3_data, np.random.default_rng(5))
        assert first == second

    def test_empty_dataset(self, chain):
        with pytest.raises(EmptyDataError):
            bootstrap_resample(Dataset.empty(chain.variables), np.random.default_rng(0))

    def test_mean_multiplicity_is_one(self):
        n, resamples = 100, 1000
        variables = [Variable.with_arity("X", 10), Variable.with_arity("Y", 10)]
        ds = Dataset.from_records(variables, [Record.observed([i // 10, i % 10]) for i in range(n)])
        rng = np.random.default_rng(21)
        counts = np.zeros(n)
        for _ in range(resamples):
            sample = bootstrap_resample(ds, rng)
            counts += np.bincount(sample.values[:, 0] * 10 + sample.values[:, 1], minlength=n)
        multiplicity = counts / resamples
        tolerance = 3 * np.sqrt((1 - 1 / n) / resamples)
        assert multiplicity.sum() == pytest.approx(n)
        assert np.sum(np.abs(multiplicity - 1) <= tolerance) >= 97


class TestNetworkDocuments:
    def test_parse(self, chain_doc):
        net = parse_network(json.dumps(chain_doc))
        assert net.names == ("A", "B")
        assert net.variables[0].states == ("a0", "a1")
        assert net.dag.parents == ((), (0,))
        np.testing.assert_allclose(net.cpts[1].probs, [[0.9, 0.1], [0.2, 0.8]])

    def test_round_trip_through_file(self, chain3, tmp_path):
        path = write_network(tmp_path / "net.json", chain3)
        assert read_network(path) == chain3
        assert path.read_bytes().endswith(b"}\n")
        assert b"\r\n" not in path.read_bytes()

    def test_invalid_json(self):
        with pytest.raises(MalformedDocumentError):
            parse_network("{not json")

    def test_unknown_key(self, chain_doc):
        chain_doc["extra"] = 1
        with pytest.raises(MalformedDocumentError):
            parse_network(json.dumps(chain_doc))

    def test_unknown_edge_endpoint(self, chain_doc):
        chain_doc["edges"].append(["A", "Z"])
        with pytest.raises(MalformedDocumentError, match="unknown variables"):
            parse_network(json.dumps(chain_doc))

    def test_cycle(self, chain_doc):
        chain_doc["edges"].append(["B", "A"])
        with pytest.raises(CyclicGraphError) as exc_info:
            parse_network(json.dumps(chain_doc))
        assert set(exc_info.value.edges) == {("A", "B"), ("B", "A")}

    def test_row_sum(self, chain_doc):
        chain_doc["cpts"]["B"][1] = [0.2, 0.7]
        with pytest.raises(RowSumError):
            parse_network(json.dumps(chain_doc))

    def test_wrong_row_count(self, chain_doc):
        chain_doc["cpts"]["B"] = [[0.5, 0.5]]
        with pytest.raises(ArityMismatchError):
            parse_network(json.dumps(chain_doc))

    def test_missing_cpt(self, chain_doc):
        del chain_doc["cpts"]["B"]
        with pytest.raises(MalformedDocumentError, match="missing"):
            parse_network(json.dumps(chain_doc))

    def test_probabilities_keep_seventeen_digits(self, make_net):
        third = 1 / 3
        net = make_net([3], [[]], [[[third, third, third]]])
        text = serialize_network(net)
        assert format(third, ".17g") in text
        assert "0.33333333333333331" in text
        assert parse_network(text) == net

    def test_alarm_topology_round_trip(self):
        names = list(ALARM_ARITIES)
        index = {name: i for i, name in enumerate(names)}
        variables = [Variable.with_arity(name, ALARM_ARITIES[name]) for name in names]
        edges = [(index[p], index[c]) for c, ps in ALARM_PARENTS.items() for p in ps]
        net = random_parameters(variables, Dag.from_edges(len(names), edges), np.random.default_rng(0))

        parsed = parse_network(serialize_network(net))
        assert parsed.n_vars == 37
        assert parsed.dag.edge_count == 46
        assert parsed == net


class TestDatasetTables:
    def test_serialize_format(self, chain):
        ds = Dataset.from_records(
            chain.variables, [Record.observed([0, 1]), Record.observed([1, 0], Intervention.of({0: 1}))]
        )
        assert serialize_dataset(ds) == "A,B,do_A,do_B\n0,1,0,0\n1,0,1,0\n"

    def test_round_trip_through_file(self, chain3_data, tmp_path):
        path = write_dataset(tmp_path / "data.csv", chain3_data)
        assert read_dataset(path, chain3_data.variables) == chain3_data

    def test_columns_may_come_in_any_order(self, chain):
        ds = parse_dataset("do_B,B,A,do_A\n1,1,0,0\n", chain.variables)
        assert ds[0].values == (0, 1)
        assert ds[0].intervened == (False, True)

    def test_unknown_column(self, chain):
        with pytest.raises(UnknownColumnError):
            parse_dataset("A,B,C,do_A,do_B\n0,0,0,0,0\n", chain.variables)

    def test_missing_flag_column(self, chain):
        with pytest.raises(MissingFlagColumnError):
            parse_dataset("A,B,do_A\n0,0,0\n", chain.variables)

    def test_state_out_of_range(self, chain):
        with pytest.raises(StateOutOfRangeError):
            parse_dataset("A,B,do_A,do_B\n0,2,0,0\n", chain.variables)

    def test_bad_flag(self, chain):
        with pytest.raises(StateOutOfRangeError, match="0/1"):
            parse_dataset("A,B,do_A,do_B\n0,1,0,2\n", chain.variables)

    def test_empty_text(self, chain):
        with pytest.raises(DatasetFormatError, match="header"):
            parse_dataset("", chain.variables)

    def test_sampled_records_reserialize_byte_identically(self, chain3):
        rng = np.random.default_rng(8)
        q = Intervention.of({1: 0})
        observed = Dataset.from_samples(chain3.variables, forward_sample(chain3, Intervention.empty(), 500, rng))
        forced = Dataset.from_samples(chain3.variables, forward_sample(chain3, q, 500, rng), q)
        ds = Dataset.from_records(chain3.variables, [*observed, *forced])
        text = serialize_dataset(ds)
        parsed = parse_dataset(text, chain3.variables)
        assert len(parsed) == 1000
        assert parsed == ds
        assert serialize_dataset(parsed).encode() == text.encode()
