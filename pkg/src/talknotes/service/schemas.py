"""Pydantic request/response and wire-message models for the session service."""

from __future__ import annotations

from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field

from talknotes.config import MODES


class BoundsIn(BaseModel):
    x0: float
    y0: float
    x1: float
    y1: float
    z0: float | None = None
    z1: float | None = None


class SceneElementIn(BaseModel):
    id: str
    name: str
    bounds: BoundsIn


class CanvasIn(BaseModel):
    width: int = Field(gt=0)
    height: int = Field(gt=0)


class SessionCreateRequest(BaseModel):
    mode: Literal["pointaloud", "baseline"] = "pointaloud"
    brief: str = ""
    canvas: CanvasIn
    scene: list[SceneElementIn] = []
    initial_view: Literal["2D", "3D"] = "2D"
    params: dict[str, float] = {}

    model_config = ConfigDict(extra="forbid")


class SessionCreateResponse(BaseModel):
    session_id: str
    mode: str


class AnchorOut(BaseModel):
    x: float
    y: float
    z: float | None = None
    view: str
    confidence: str


class TraceSampleOut(BaseModel):
    x: float
    y: float
    t: int
    view: str
    z: float | None = None


class NoteOut(BaseModel):
    id: str
    transcript: str
    t_start: int
    t_end: int
    summary: str | None
    labels: list[str]
    actions: list[str]
    anchor: AnchorOut
    linked_elements: list[str]
    thread_id: str | None
    merged_from: list[str]
    state: str
    trace: list[TraceSampleOut]


class NotesResponse(BaseModel):
    session_id: str
    notes: list[NoteOut]


class ThreadOut(BaseModel):
    id: str
    title: str
    note_ids: list[str]
    t_last: int


class ThreadsResponse(BaseModel):
    session_id: str
    threads: list[ThreadOut]


class SessionStatusResponse(BaseModel):
    session_id: str
    mode: str
    closed: bool
    now: int
    notes: int
    threads: int


# -- client -> server websocket messages -------------------------------------

class FragmentMessage(BaseModel):
    kind: Literal["fragment"]
    text: str
    t_start: int = Field(ge=0)
    t_end: int = Field(ge=0)
    is_final: bool

    model_config = ConfigDict(extra="forbid")


class PointerMessage(BaseModel):
    kind: Literal["pointer"]
    x: float
    y: float
    t: int = Field(ge=0)
    view: Literal["2D", "3D"] = "2D"
    z: float | None = None

    model_config = ConfigDict(extra="forbid")


class NoteCheckedMessage(BaseModel):
    kind: Literal["note_checked"]
    id: str
    t: int | None = None

    model_config = ConfigDict(extra="forbid")


class TipAckMessage(BaseModel):
    kind: Literal["tip_ack"]
    id: str
    t: int | None = None

    model_config = ConfigDict(extra="forbid")


class FilterMessage(BaseModel):
    kind: Literal["filter"]
    labels: list[str]
    t: int | None = None

    model_config = ConfigDict(extra="forbid")


class ViewChangeMessage(BaseModel):
    kind: Literal["view_change"]
    view: Literal["2D", "3D"]
    t: int | None = None

    model_config = ConfigDict(extra="forbid")


ClientMessage = Annotated[
    Union[
        FragmentMessage,
        PointerMessage,
        NoteCheckedMessage,
        TipAckMessage,
        FilterMessage,
        ViewChangeMessage,
    ],
    Field(discriminator="kind"),
]


class ClientEnvelope(BaseModel):
    message: ClientMessage


assert set(MODES) == {"pointaloud", "baseline"}
