"""Tests for the activebn exception hierarchy."""

import pytest

from activebn.exceptions import (
    ActiveBNError,
    ArityMismatchError,
    ConfigError,
    CyclicGraphError,
    DatasetFormatError,
    EmptyDataError,
    EnumerationTooLargeError,
    InfiniteDivergenceError,
    InvalidInterventionError,
    MalformedDocumentError,
    MissingFlagColumnError,
    NetworkFormatError,
    RowSumError,
    SchemaMismatchError,
    ShapeError,
    StateOutOfRangeError,
    UndefinedPosteriorError,
    UnknownColumnError,
    ValidationError,
)


class TestActiveBNError:
    """Tests for the base exception."""

    def test_is_base_exception(self):
        assert issubclass(ActiveBNError, Exception)

    def test_message_attribute(self):
        error = ActiveBNError("Test error message")
        assert error.message == "Test error message"
        assert str(error) == "Test error message"

    def test_details_default_to_empty(self):
        assert ActiveBNError("x").details == {}

    def test_details_are_copied(self):
        details = {"variable": "A"}
        error = ActiveBNError("x", details=details)
        details["variable"] = "B"
        assert error.details == {"variable": "A"}


class TestExceptionInheritance:
    """Tests for the exception tree."""

    def test_all_exceptions_inherit_from_base(self):
        for exc in [
            ValidationError,
            NetworkFormatError,
            DatasetFormatError,
            EmptyDataError,
            EnumerationTooLargeError,
            InfiniteDivergenceError,
            UndefinedPosteriorError,
            ConfigError,
        ]:
            assert issubclass(exc, ActiveBNError), f"{exc.__name__} should inherit from ActiveBNError"

    @pytest.mark.parametrize(
        ("exc", "parent"),
        [
            (InvalidInterventionError, ValidationError),
            (ShapeError, ValidationError),
            (SchemaMismatchError, ValidationError),
            (MalformedDocumentError, NetworkFormatError),
            (CyclicGraphError, NetworkFormatError),
            (RowSumError, NetworkFormatError),
            (ArityMismatchError, NetworkFormatError),
            (UnknownColumnError, DatasetFormatError),
            (MissingFlagColumnError, DatasetFormatError),
            (StateOutOfRangeError, DatasetFormatError),
        ],
    )
    def test_subclass_parents(self, exc, parent):
        assert issubclass(exc, parent)

    def test_format_errors_are_not_validation_errors(self):
        assert not issubclass(NetworkFormatError, ValidationError)
        assert not issubclass(DatasetFormatError, ValidationError)


class TestStructuredErrors:
    def test_cyclic_graph_error_keeps_edges(self):
        error = CyclicGraphError("cycle", edges=[("A", "B"), ("B", "A")])
        assert error.edges == [("A", "B"), ("B", "A")]

    def test_enumeration_error_records_sizes(self):
        error = EnumerationTooLargeError("too big", state_count=2**30, budget=2**20)
        assert error.state_count == 2**30
        assert error.budget == 2**20
        assert error.details == {"state_count": 2**30, "budget": 2**20}

    def test_exception_chaining_preserves_cause(self):
        original = ValueError("bad json")
        with pytest.raises(ConfigError) as exc_info:
            try:
                raise original
            except ValueError as exc:
                raise ConfigError("wrapped") from exc
        assert exc_info.value.__cause__ is original
