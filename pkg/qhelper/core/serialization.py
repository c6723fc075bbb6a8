"""
JSON schemas for states, channels and RI certificates.

Complex entries are written as [re, im] pairs; plain numbers are read as real.
"""
import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from qhelper.core.channels import (
    ChannelParams, KrausChannel, StinespringIsometry, kraus_to_stinespring,
    params_to_isometry, preset_from_string,
)
from qhelper.core.qcore import DensityOperator, PureState, State, SystemLayout

ComplexEntry = Union[float, List[float]]


def _to_complex(entry: ComplexEntry) -> complex:
    if isinstance(entry, (int, float)):
        return complex(entry)
    if len(entry) != 2:
        raise ValueError(f"Complex entry must be [re, im], got {entry}")
    return complex(entry[0], entry[1])


def _check_matrix(rows: List[List[ComplexEntry]]) -> List[List[ComplexEntry]]:
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("Matrix rows must be nonempty and of equal length")
    for row in rows:
        for entry in row:
            _to_complex(entry)
    return rows


def matrix_from_json(rows: List[List[ComplexEntry]]) -> np.ndarray:
    return np.array([[_to_complex(e) for e in row] for row in rows], dtype=np.complex128)


def matrix_to_json(matrix: np.ndarray) -> List[List[List[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(matrix)]


class StateModel(BaseModel):
    """{"labels": [...], "dims": [...], "matrix": ...} or the same with "vector"."""
    model_config = ConfigDict(extra="forbid")

    labels: List[str] = Field(..., min_length=1)
    dims: List[int] = Field(..., min_length=1)
    matrix: Optional[List[List[ComplexEntry]]] = None
    vector: Optional[List[ComplexEntry]] = None

    @field_validator("dims")
    @classmethod
    def _positive_dims(cls, dims: List[int]) -> List[int]:
        if any(d < 1 for d in dims):
            raise ValueError("dims must be positive")
        return dims

    @field_validator("matrix")
    @classmethod
    def _rectangular(cls, rows):
        return None if rows is None else _check_matrix(rows)

    @field_validator("vector")
    @classmethod
    def _complex_entries(cls, entries):
        if entries is None:
            return None
        if not entries:
            raise ValueError("vector must be nonempty")
        for entry in entries:
            _to_complex(entry)
        return entries

    @model_validator(mode="after")
    def _one_payload(self) -> "StateModel":
        if (self.matrix is None) == (self.vector is None):
            raise ValueError("exactly one of 'matrix' or 'vector' is required")
        if len(self.labels) != len(self.dims):
            raise ValueError("labels and dims must have the same length")
        return self

    def to_state(self) -> State:
        layout = SystemLayout(tuple(self.labels), tuple(self.dims))
        if self.vector is not None:
            return PureState(layout, np.array([_to_complex(e) for e in self.vector], dtype=np.complex128))
        return DensityOperator(layout, matrix_from_json(self.matrix))

    @classmethod
    def from_state(cls, state: State) -> "StateModel":
        if isinstance(state, PureState):
            vector = [[float(z.real), float(z.imag)] for z in state.vector]
            return cls(labels=list(state.labels), dims=list(state.layout.dims), vector=vector)
        return cls(labels=list(state.labels), dims=list(state.layout.dims), matrix=matrix_to_json(state.matrix))


class KrausModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["kraus"]
    dim_in: int = Field(..., ge=1)
    dim_out: int = Field(..., ge=1)
    operators: List[List[List[ComplexEntry]]] = Field(..., min_length=1)

    @field_validator("operators")
    @classmethod
    def _rectangular(cls, operators):
        return [_check_matrix(op) for op in operators]

    def to_isometry(self) -> StinespringIsometry:
        ops = tuple(matrix_from_json(op) for op in self.operators)
        return kraus_to_stinespring(KrausChannel(self.dim_in, self.dim_out, ops))


class StinespringModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["stinespring"]
    dim_in: int = Field(..., ge=1)
    dim_out: int = Field(..., ge=1)
    dim_env: int = Field(..., ge=1)
    matrix: List[List[ComplexEntry]]

    @field_validator("matrix")
    @classmethod
    def _rectangular(cls, rows):
        return _check_matrix(rows)

    def to_isometry(self) -> StinespringIsometry:
        return StinespringIsometry(self.dim_in, self.dim_out, self.dim_env, matrix_from_json(self.matrix))


class PresetModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["preset"]
    name: str
    dim_in: int = Field(2, ge=1)

    def to_isometry(self) -> StinespringIsometry:
        return kraus_to_stinespring(preset_from_string(self.name, self.dim_in))


class ParamsModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["params"]
    dim_in: int = Field(..., ge=1)
    dim_out: int = Field(..., ge=1)
    dim_env: int = Field(..., ge=1)
    theta: List[float]

    def to_isometry(self) -> StinespringIsometry:
        return params_to_isometry(ChannelParams(self.dim_in, self.dim_out, self.dim_env, np.array(self.theta)))


class ChannelModel(BaseModel):
    channel: Union[KrausModel, StinespringModel, PresetModel, ParamsModel] = Field(..., discriminator="kind")


def channel_from_json(data: Dict[str, Any]) -> StinespringIsometry:
    return ChannelModel(channel=data).channel.to_isometry()


def isometry_to_json(iso: StinespringIsometry) -> Dict[str, Any]:
    return {"kind": "stinespring", "dim_in": iso.dim_in, "dim_out": iso.dim_out,
            "dim_env": iso.dim_env, "matrix": matrix_to_json(iso.V)}


def state_from_json(data: Dict[str, Any]) -> State:
    return StateModel.model_validate(data).to_state()


def state_to_json(state: State) -> Dict[str, Any]:
    return StateModel.from_state(state).model_dump(exclude_none=True)


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

class StepModel(BaseModel):
    """One derivation step: an RI (text or library name), optionally scaled."""
    model_config = ConfigDict(extra="forbid")
    ri: str
    scale: Optional[str] = None


class SampleModel(BaseModel):
    """Random purifications ψ over `labels` with `dims`, or explicit states."""
    model_config = ConfigDict(extra="forbid")
    kind: Literal["random_pure", "states"] = "random_pure"
    labels: List[str] = Field(default_factory=lambda: ["A", "B", "R"])
    dims: List[int] = Field(default_factory=lambda: [2, 2, 2])
    count: int = Field(50, ge=1)
    seed: int = 0
    states: List[StateModel] = Field(default_factory=list)

    @model_validator(mode="after")
    def _consistent(self) -> "SampleModel":
        if self.kind == "states" and not self.states:
            raise ValueError("kind 'states' needs a nonempty 'states' list")
        if len(self.labels) != len(self.dims):
            raise ValueError("labels and dims must have the same length")
        return self


class CertificateModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    name: str = "certificate"
    target: str
    steps: List[StepModel] = Field(..., min_length=1)
    bindings: Dict[str, str] = Field(default_factory=dict)
    samples: SampleModel = Field(default_factory=SampleModel)
    free_classical: Optional[bool] = None


def load_json(path: Union[str, Path]) -> Any:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def dumps_report(report: Dict[str, Any]) -> str:
    """Deterministic JSON for stdout and report files."""
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False)
