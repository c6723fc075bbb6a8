"""
Input validation for command-line arguments.

Turns state and channel spec strings into validated objects before any
computation starts; every failure is a ValidationError.
"""
import json
import os
from typing import Any, Dict, Optional, Tuple

import numpy as np
import pydantic
from scipy.optimize import brentq

from qhelper.core.channels import (
    StinespringIsometry, kraus_to_stinespring, preset_from_string, random_isometry,
)
from qhelper.core.errors import QHelperError
from qhelper.core.qcore import (
    DensityOperator, State, SystemLayout, bell_state, diagonal_state, isotropic_state,
    product_state, random_density,
)
from qhelper.core.serialization import channel_from_json, load_json, state_from_json
from qhelper.utils.centralized_logging import get_logger

logger = get_logger(__name__)

STATE_PRESETS = ("bell", "isotropic:p", "product:h1,h2", "random:dA,dB,seed")
MAX_SPEC_DIM = 64


class ValidationError(QHelperError):
    """Custom exception for validation errors."""
    pass


def binary_entropy(q: float) -> float:
    if q <= 0.0 or q >= 1.0:
        return 0.0
    return float(-q * np.log2(q) - (1 - q) * np.log2(1 - q))


def qubit_with_entropy(h: float, label: str) -> DensityOperator:
    """diag(1−q, q) with binary entropy h, q ∈ [0, ½]."""
    if not 0.0 <= h <= 1.0:
        raise ValidationError(f"Qubit entropy must be in [0, 1], got {h}")
    if h == 0.0:
        q = 0.0
    elif h == 1.0:
        q = 0.5
    else:
        q = brentq(lambda x: binary_entropy(x) - h, 1e-300, 0.5, xtol=1e-15)
    return diagonal_state([1.0 - q, q], label)


class InputValidator:
    """Validates and converts CLI inputs."""

    @staticmethod
    def _load_json_argument(value: str, what: str) -> Any:
        text = value.strip()
        try:
            if text.startswith("{"):
                return json.loads(text)
            return load_json(text)
        except (OSError, json.JSONDecodeError) as e:
            raise ValidationError(f"Cannot read {what} JSON {value!r}: {e}")

    @staticmethod
    def _numbers(arg: str, count: int, name: str) -> Tuple[float, ...]:
        parts = [p.strip() for p in arg.split(",")]
        if len(parts) != count or not all(parts):
            raise ValidationError(f"{name} expects {count} comma-separated values, got {arg!r}")
        try:
            return tuple(float(p) for p in parts)
        except ValueError:
            raise ValidationError(f"{name} expects numbers, got {arg!r}")

    @staticmethod
    def validate_state(spec: str) -> State:
        """
        Parse a state spec.

        Args:
            spec: `bell`, `isotropic:p` (p·Φ + (1−p)·I/4), `product:h1,h2`,
                `random:dA,dB,seed`, inline JSON, or a path to a JSON file

        Returns:
            Validated state

        Raises:
            ValidationError: If the spec is malformed or the state is invalid
        """
        if spec is None or not spec.strip():
            raise ValidationError("State spec is required")
        text = spec.strip()
        try:
            if text.startswith("{") or text.endswith(".json") or os.path.isfile(text):
                return state_from_json(InputValidator._load_json_argument(text, "state"))
            name, _, arg = text.partition(":")
            name = name.lower()
            if name == "bell" and not arg:
                return bell_state()
            if name == "isotropic":
                (p,) = InputValidator._numbers(arg, 1, "isotropic")
                return isotropic_state(p)
            if name == "product":
                h1, h2 = InputValidator._numbers(arg, 2, "product")
                return product_state(qubit_with_entropy(h1, "A"), qubit_with_entropy(h2, "B"))
            if name == "random":
                da, db, seed = InputValidator._numbers(arg, 3, "random")
                da, db = InputValidator.validate_positive_int(da, "dA"), InputValidator.validate_positive_int(db, "dB")
                if da * db > MAX_SPEC_DIM:
                    raise ValidationError(f"random state dimension {da * db} exceeds {MAX_SPEC_DIM}")
                return random_density(SystemLayout.of(A=da, B=db), InputValidator.validate_seed(seed))
        except pydantic.ValidationError as e:
            raise ValidationError(f"State JSON does not match the schema: {e}")
        except ValidationError:
            raise
        except QHelperError as e:
            raise ValidationError(f"Invalid state {spec!r}: {e}")
        except (TypeError, ValueError) as e:
            raise ValidationError(f"Invalid state {spec!r}: {e}")
        raise ValidationError(f"Unknown state spec {spec!r}; presets: {', '.join(STATE_PRESETS)}")

    @staticmethod
    def validate_source(spec: str) -> DensityOperator:
        """A state on exactly A and B, as the rate functionals need."""
        state = InputValidator.validate_state(spec)
        if sorted(state.labels) != ["A", "B"]:
            raise ValidationError(f"Source must be labeled A, B; got {list(state.labels)}")
        return state if isinstance(state, DensityOperator) else state.to_density()

    @staticmethod
    def validate_channel(spec: str, dim_in: int, seed: int = 0) -> StinespringIsometry:
        """
        Parse a channel spec: `preset:NAME[:args]` or a bare preset name,
        `random:dC,dE` (seeded Haar isometry), inline JSON or a JSON file.
        """
        if spec is None or not spec.strip():
            raise ValidationError("Channel spec is required")
        text = spec.strip()
        try:
            if text.startswith("{") or text.endswith(".json") or os.path.isfile(text):
                return channel_from_json(InputValidator._load_json_argument(text, "channel"))
            if text.startswith("preset:"):
                text = text[len("preset:"):]
            if text.startswith("random:"):
                dc, de = InputValidator._numbers(text[len("random:"):], 2, "random")
                return random_isometry(dim_in, InputValidator.validate_positive_int(dc, "dC"),
                                       InputValidator.validate_positive_int(de, "dE"), seed)
            return kraus_to_stinespring(preset_from_string(text, dim_in))
        except pydantic.ValidationError as e:
            raise ValidationError(f"Channel JSON does not match the schema: {e}")
        except ValidationError:
            raise
        except QHelperError as e:
            raise ValidationError(f"Invalid channel {spec!r}: {e}")
        except (TypeError, ValueError) as e:
            raise ValidationError(f"Invalid channel {spec!r}: {e}")

    @staticmethod
    def validate_positive_int(value: Any, field_name: str) -> int:
        try:
            number = float(value)
        except (TypeError, ValueError):
            raise ValidationError(f"{field_name} must be a positive integer, got {value!r}")
        if not number.is_integer() or number < 1:
            raise ValidationError(f"{field_name} must be a positive integer, got {value!r}")
        return int(number)

    @staticmethod
    def validate_seed(value: Any, field_name: str = "seed") -> int:
        """Nonnegative integer; numpy rejects negative seeds."""
        try:
            number = float(value)
        except (TypeError, ValueError):
            raise ValidationError(f"{field_name} must be a nonnegative integer, got {value!r}")
        if not number.is_integer() or number < 0:
            raise ValidationError(f"{field_name} must be a nonnegative integer, got {value!r}")
        return int(number)

    @staticmethod
    def validate_lambdas(value: str) -> Tuple[float, ...]:
        """Comma-separated ascending nonnegative reals."""
        try:
            grid = tuple(float(v) for v in value.split(",") if v.strip())
        except ValueError:
            raise ValidationError(f"--lambdas must be comma-separated numbers, got {value!r}")
        if not grid:
            raise ValidationError("--lambdas must not be empty")
        if any(x < 0 or not np.isfinite(x) for x in grid):
            raise ValidationError("--lambdas values must be finite and nonnegative")
        if list(grid) != sorted(grid):
            raise ValidationError("--lambdas must be ascending")
        return grid

    @staticmethod
    def validate_tolerance(value: Any) -> float:
        try:
            tol = float(value)
        except (TypeError, ValueError):
            raise ValidationError(f"--tol must be a number, got {value!r}")
        if not (0.0 < tol < 1.0):
            raise ValidationError(f"--tol must be in (0, 1), got {tol}")
        return tol

    @staticmethod
    def validate_bindings(value: Optional[str]) -> Dict[str, str]:
        """`A=A1,B=B1` maps RI labels to state labels."""
        if not value:
            return {}
        bindings = {}
        for item in value.split(","):
            key, sep, target = item.partition("=")
            if not sep or not key.strip() or not target.strip():
                raise ValidationError(f"Bad binding {item!r}; expected LABEL=LABEL")
            bindings[key.strip()] = target.strip()
        return bindings
