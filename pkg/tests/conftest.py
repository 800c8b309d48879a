import pytest

from talknotes.config import EngineParams, SessionConfig
from talknotes.engine import SessionEngine
from talknotes.model import Bounds, PointerSample, SceneElement, TranscriptFragment, View
from talknotes.oracle import DeterministicOracle


@pytest.fixture
def oracle():
    return DeterministicOracle()


@pytest.fixture
def config():
    return SessionConfig(
        mode="pointaloud",
        brief="repurpose the apartment for childcare",
        canvas_width=1000,
        canvas_height=800,
        scene=(
            SceneElement("el-laundry", "Laundry", Bounds(0, 0, 200, 150)),
            SceneElement("el-bedroom", "Bedroom", Bounds(300, 0, 600, 250)),
            SceneElement("el-kitchen", "Kitchen", Bounds(650, 300, 950, 600)),
        ),
    )


@pytest.fixture
def engine(config, oracle):
    return SessionEngine(config, oracle, enrich_sleep=lambda s: None)


def frag(text: str, t_start: int, t_end: int, final: bool = True) -> TranscriptFragment:
    return TranscriptFragment(text=text, t_start=t_start, t_end=t_end, is_final=final)


def sample(x: float, y: float, t: int, view: View = View.TWO_D, z: float | None = None) -> PointerSample:
    return PointerSample(x=x, y=y, t=t, view=view, z=z)


def make_engine(
    mode: str = "pointaloud",
    brief: str = "test brief",
    scene: tuple = (),
    params: EngineParams | None = None,
    oracle_=None,
    sink=None,
) -> SessionEngine:
    config = SessionConfig(
        mode=mode,
        brief=brief,
        canvas_width=1000,
        canvas_height=800,
        scene=scene,
        params=params or EngineParams(),
    )
    return SessionEngine(
        config, oracle_ or DeterministicOracle(), sink=sink, enrich_sleep=lambda s: None
    )
