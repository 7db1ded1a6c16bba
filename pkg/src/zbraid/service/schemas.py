"""Pydantic request/response models for the zbraid service."""

from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, Field, model_validator

Matrix = list[list[int]]


class GermSpec(BaseModel):
    kind: Literal["zn", "braid"] = "zn"
    dim: Optional[int] = Field(default=None, ge=1, le=8)
    strands: Optional[int] = Field(default=None, ge=1, le=8)

    @model_validator(mode="after")
    def _defaults(self):
        if self.kind == "zn" and self.dim is None:
            self.dim = 2
        if self.kind == "braid" and self.strands is None:
            self.strands = 3
        return self

    @property
    def size(self) -> int:
        return self.dim if self.kind == "zn" else self.strands


class WordRequest(BaseModel):
    germ: GermSpec = GermSpec()
    word: str = Field(description="letters separated by |, inverse letters suffixed ^-1")
    trace: bool = False


class TwoWordRequest(BaseModel):
    germ: GermSpec = GermSpec()
    left: str
    right: str
    trace: bool = False


class GroupNFResponse(BaseModel):
    k: int
    body: list[Any]
    text: str


class EqResponse(BaseModel):
    equal: bool


class MatrixPairRequest(BaseModel):
    dim: int = Field(ge=1, le=8)
    left: str
    right: str
    trace: bool = False


class PrecedesResponse(BaseModel):
    result: bool
    witness: Optional[list[int]] = None


class CosetResponse(BaseModel):
    rep: Matrix
    text: str
    trace: Optional[str] = None


class DecomposeRequest(BaseModel):
    dim: int = Field(ge=1, le=8)
    matrix: str


class DecomposeResponse(BaseModel):
    letters: list[dict]
    minimal: bool
    text: str


class RewriteTypeRequest(BaseModel):
    dim: int = Field(ge=2, le=8)
    type_word: list[int]


class RewriteTypeResponse(BaseModel):
    derivation: list[dict]
    result: list[int]


class ConnectRequest(BaseModel):
    dim: int = Field(ge=2, le=3)
    left: str
    right: str
    max_moves: int = 4000


class ConnectResponse(BaseModel):
    derivation: list[dict]
    moves: int


class CheckRequest(BaseModel):
    suite: str
    germ: GermSpec = GermSpec()
    trials: Optional[int] = None
    seed: int = 0


class CheckResponse(BaseModel):
    suite: str
    passed: bool
    lines: list[str]
    seconds: float
