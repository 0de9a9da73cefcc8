"""JSON encoding for complex matrices, spectra and numerical results."""

import json
import math
from fractions import Fraction
from typing import Any, Dict, List, Optional

import numpy as np

from sun_expm.config import logger
from sun_expm.errors import InvalidInputError

# every float in CLI output carries 17 significant digits
FLOAT_FORMAT = "%.17g"


class NumericJSONEncoder(json.JSONEncoder):
    """JSON encoder for numerical result types.

    Handles the following types:
    - complex / numpy complex: [re, im] pair
    - numpy arrays: nested lists
    - numpy integer and floating scalars: Python int / float
    - Fraction: float
    """

    def default(self, obj: Any) -> Any:
        """Convert special types."""
        if isinstance(obj, np.ndarray):
            return clean_result_for_json(obj.tolist())
        elif isinstance(obj, (complex, np.complexfloating)):
            return [float(obj.real), float(obj.imag)]
        elif isinstance(obj, np.integer):
            return int(obj)
        elif isinstance(obj, np.floating):
            return float(obj)
        elif isinstance(obj, Fraction):
            return float(obj)
        return super().default(obj)


def format_float(value: float) -> str:
    """FLOAT_FORMAT text for a float, keeping a decimal point on integral values."""
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    text = FLOAT_FORMAT % value
    if "." not in text and "e" not in text:
        text += ".0"
    return text


class FixedPrecisionJSONEncoder(NumericJSONEncoder):
    """NumericJSONEncoder that writes every float through format_float."""

    def iterencode(self, o: Any, _one_shot: bool = False):
        markers: Optional[Dict[int, Any]] = {} if self.check_circular else None
        if self.ensure_ascii:
            encode_string = json.encoder.encode_basestring_ascii
        else:
            encode_string = json.encoder.encode_basestring
        iterencode = json.encoder._make_iterencode(
            markers,
            self.default,
            encode_string,
            self.indent,
            format_float,
            self.key_separator,
            self.item_separator,
            self.sort_keys,
            self.skipkeys,
            _one_shot,
        )
        return iterencode(o, 0)


def dumps_result(obj: Any) -> str:
    """Serialize a result to deterministic JSON text.

    Args:
        obj: Result object (dicts, lists, numbers, arrays)

    Returns:
        str: JSON string with sorted keys and 17 significant digits per float
    """
    return json.dumps(clean_result_for_json(obj), cls=FixedPrecisionJSONEncoder, sort_keys=True)


def clean_result_for_json(value: Any) -> Any:
    """Recursively convert a result so that every leaf is JSON serializable.

    Args:
        value: Result value

    Returns:
        Any: The cleaned value
    """
    if isinstance(value, dict):
        return {str(key): clean_result_for_json(item) for key, item in value.items()}
    elif isinstance(value, (list, tuple)):
        return [clean_result_for_json(item) for item in value]
    elif isinstance(value, np.ndarray):
        return clean_result_for_json(value.tolist())
    elif isinstance(value, (bool, np.bool_)):
        return bool(value)
    elif isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    elif isinstance(value, np.integer):
        return int(value)
    elif isinstance(value, (np.floating, Fraction)):
        return float(value)
    return value


def matrix_to_json(matrix: np.ndarray) -> Dict[str, Any]:
    """Encode a square complex matrix as {"n", "re", "im"}.

    Args:
        matrix: Square complex array

    Returns:
        Dict[str, Any]: Row-major encoding
    """
    matrix = np.asarray(matrix, dtype=np.complex128)
    return {
        "n": int(matrix.shape[0]),
        "re": matrix.real.tolist(),
        "im": matrix.imag.tolist(),
    }


def matrix_from_json(document: Dict[str, Any]) -> np.ndarray:
    """Decode a {"n", "re", "im"} document into a complex matrix.

    The "im" part may be omitted for real matrices.

    Args:
        document: Decoded JSON object

    Returns:
        np.ndarray: Complex matrix of shape (n, n)

    Raises:
        InvalidInputError: If the document is malformed
    """
    if not isinstance(document, dict) or "re" not in document:
        msg = "Matrix document must be an object with at least an 're' field"
        logger.error(msg)
        raise InvalidInputError(msg)

    try:
        real = np.asarray(document["re"], dtype=np.float64)
        imag = np.asarray(document.get("im", np.zeros_like(real)), dtype=np.float64)
    except (TypeError, ValueError) as e:
        msg = f"Matrix entries must be numbers: {e}"
        logger.error(msg)
        raise InvalidInputError(msg) from e

    n = int(document.get("n", real.shape[0] if real.ndim else 0))
    if real.shape != (n, n) or imag.shape != (n, n):
        msg = f"Matrix parts must both have shape ({n}, {n}), got {real.shape} and {imag.shape}"
        logger.error(msg)
        raise InvalidInputError(msg)

    return real + 1j * imag


def spectrum_to_json(values: Any) -> List[List[float]]:
    """Encode eigenvalues as a list of [re, im] pairs."""
    return [[float(np.real(v)), float(np.imag(v))] for v in np.asarray(values).ravel()]

