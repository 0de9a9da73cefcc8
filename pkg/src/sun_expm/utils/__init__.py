"""Utility functions for sun-expm."""

from sun_expm.utils.json_encoder import (
    NumericJSONEncoder,
    clean_result_for_json,
    dumps_result,
    matrix_from_json,
    matrix_to_json,
    spectrum_to_json,
)

__all__ = [
    "NumericJSONEncoder",
    "clean_result_for_json",
    "dumps_result",
    "matrix_from_json",
    "matrix_to_json",
    "spectrum_to_json",
]
