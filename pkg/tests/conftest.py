from __future__ import annotations

import pytest

from appforge.ir.model import (
    DataEntity,
    DataModel,
    EntityField,
    GuiSkeleton,
    NavigateAction,
    SkeletonElement,
    Storyboard,
    StoryboardNode,
)
from appforge.planning import Project


@pytest.fixture
def wireframe() -> Storyboard:
    return Storyboard(
        description="Fashion-forward shoe marketplace app.",
        nodes=(
            StoryboardNode(1, "Home", "This is the home screen...", "HomeView", (2,)),
            StoryboardNode(2, "Product Detail", "This screen shows...", "ProductDetailView", (1,)),
        ),
    )


@pytest.fixture
def notes_data_model() -> DataModel:
    return DataModel(
        entities=(
            DataEntity(
                name="Note",
                doc="One note.",
                fields=(EntityField("title", "String"), EntityField("body", "String")),
            ),
        )
    )


def simple_skeleton(view: str, node_id: int, dests: tuple[str, ...] = (), value: str | None = None) -> GuiSkeleton:
    children: list[SkeletonElement] = [
        SkeletonElement("Text", {"Value": value if value is not None else f"{view} content"})
    ]
    children.extend(
        SkeletonElement("Button", {"Label": f"Open {d}"}, action=NavigateAction(d)) for d in dests
    )
    return GuiSkeleton(
        view_name=view,
        node_id=node_id,
        state_variables=("items",),
        layout=SkeletonElement("MainContainer", children=tuple(children)),
    )


@pytest.fixture
def settings_project() -> Project:
    """Three screens: OldSettingsView(50) -> SettingsDetailView(51), plus an
    unconnected UserDetailsView(102). Skeleton for 102 is intentionally
    absent; plan execution creates it."""
    sb = Storyboard(
        description="Settings area.",
        nodes=(
            StoryboardNode(50, "Old Settings", "Legacy settings.", "OldSettingsView", (51,)),
            StoryboardNode(51, "Settings Detail", "Detail page.", "SettingsDetailView", ()),
            StoryboardNode(102, "User Details", "Shows a user.", "UserDetailsView", ()),
        ),
        entry_node_id=50,
    )
    dm = DataModel(
        entities=(
            DataEntity(
                name="UserModel",
                doc="A user.",
                fields=(EntityField("name", "String"), EntityField("age", "Int")),
            ),
        )
    )
    skeletons = {
        50: simple_skeleton("OldSettingsView", 50, ("SettingsDetailView",)),
        51: simple_skeleton("SettingsDetailView", 51),
    }
    return Project(storyboard=sb, data_model=dm, skeletons=skeletons)
