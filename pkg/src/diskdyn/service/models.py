"""Pydantic request models and wire-format converters.

Wire conventions: complex numbers are [re, im] pairs; disk automorphisms are
{"a": pair, "rotation": pair}; factored products are {"c": pair, "zeros":
[pair, ...]}; schemata are {"vertices": [{"id", "weight", "image"}, ...]};
rotation angles of group elements are exact [numerator, denominator] pairs.
Every request may carry a ``tolerances`` override map applied for the
duration of that request.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

from ..basin import BasinComponent, BasinSystem
from ..blaschke import BlaschkeProduct
from ..disk import Mobius
from ..modelspace import ModelMap
from ..schema import GroupElement, MappingSchema

Pair = tuple[float, float]


def to_complex(p: Pair) -> complex:
    return complex(p[0], p[1])


def from_complex(z: complex) -> list:
    return [z.real, z.imag]


class MobiusModel(BaseModel):
    a: Pair
    rotation: Pair

    def to_core(self) -> Mobius:
        return Mobius(to_complex(self.a), to_complex(self.rotation))

    @staticmethod
    def from_core(m: Mobius) -> dict:
        return {"a": from_complex(m.a), "rotation": from_complex(m.rotation)}


class BlaschkeModel(BaseModel):
    c: Pair
    zeros: list[Pair]

    def to_core(self) -> BlaschkeProduct:
        return BlaschkeProduct(to_complex(self.c), tuple(to_complex(z) for z in self.zeros))

    @staticmethod
    def from_core(b: BlaschkeProduct) -> dict:
        return {"c": from_complex(b.c), "zeros": [from_complex(z) for z in b.zeros]}


class SchemaVertexModel(BaseModel):
    id: str
    weight: int
    image: str


class SchemaModel(BaseModel):
    vertices: list[SchemaVertexModel]

    def to_core(self) -> MappingSchema:
        return MappingSchema.from_dict(self.model_dump())


class ModelMapModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_: SchemaModel = Field(alias="schema")
    factors: dict[str, BlaschkeModel]

    def to_core(self) -> ModelMap:
        return ModelMap.from_dict(
            {"schema": self.schema_.model_dump(), "factors": {k: v.model_dump() for k, v in self.factors.items()}}
        )


class ElementModel(BaseModel):
    automorphism: dict[str, str]
    rotation: dict[str, tuple[int, int]]

    def to_core(self, s: MappingSchema) -> GroupElement:
        return GroupElement.from_dict(s, self.model_dump())


class BasinComponentModel(BaseModel):
    image: str
    core: BlaschkeModel
    pre: MobiusModel
    post: MobiusModel


class BasinModel(BaseModel):
    components: dict[str, BasinComponentModel]

    def to_core(self) -> BasinSystem:
        labels = tuple(sorted(self.components))
        built = tuple(
            BasinComponent(
                self.components[label].image,
                self.components[label].core.to_core(),
                self.components[label].pre.to_core(),
                self.components[label].post.to_core(),
            )
            for label in labels
        )
        return BasinSystem(labels, built)

    @staticmethod
    def from_core(b: BasinSystem) -> dict:
        return b.to_dict()


class ArcModel(BaseModel):
    start: float
    end: float


class RequestBase(BaseModel):
    tolerances: dict[str, float] | None = None


class SchemaRequest(RequestBase):
    model_config = ConfigDict(populate_by_name=True)

    schema_: SchemaModel = Field(alias="schema")


class SchemaGroupsRequest(SchemaRequest):
    seed: int = 0


class EnumerateRequest(RequestBase):
    weight: int


class BlaschkeRequest(RequestBase):
    map: BlaschkeModel


class EvalRequest(BlaschkeRequest):
    z: Pair


class BarycenterRequest(RequestBase):
    points: list[Pair]


class TableRequest(BlaschkeRequest):
    depth: int
    base_index: int = 0


class MeasureRequest(BlaschkeRequest):
    arc: ArcModel
    depth: int


class CenterRequest(SchemaRequest):
    pass


class SampleRequest(SchemaRequest):
    parameters: list[float] | None = None
    seed: int = 0


class ModelRequest(RequestBase):
    map: ModelMapModel


class OrbitRequest(ModelRequest):
    max_iter: int = 10_000
    tol: float = 1e-6


class ActRequest(ModelRequest):
    element: ElementModel


class EquivalentRequest(RequestBase):
    map: ModelMapModel
    other: ModelMapModel
    tol: float | None = None


class BasinRequest(RequestBase):
    basin: BasinModel


class StraightenRequest(BasinRequest):
    mode: str = "all"   # "all" or "first"


class VerifyRequest(RequestBase):
    seed: int = 0
    options: dict[str, int] = {}


class ToMonicRequest(RequestBase):
    points: list[Pair]


class FromMonicRequest(RequestBase):
    coefficients: list[Pair]
