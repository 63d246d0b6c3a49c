"""Intermediate representations: storyboard, data model, GUI skeletons."""

from .changes import (
    AddConnection,
    AddScreen,
    RemoveConnection,
    RemoveScreen,
    StoryboardChange,
    apply_storyboard_change,
    derive_view_name,
    reachable_nodes,
)
from .model import (
    CONTAINER_KINDS,
    DataEntity,
    DataModel,
    EntityField,
    Finding,
    GuiSkeleton,
    LEAF_KINDS,
    NavigateAction,
    SEVERITY_ERROR,
    SEVERITY_WARNING,
    SkeletonElement,
    Storyboard,
    StoryboardNode,
    ValidationReport,
    is_valid_view_name,
)
from .pseudocode import skeleton_pseudocode
from .serialize import (
    KIND_DATAMODEL,
    KIND_SKELETON,
    KIND_STORYBOARD,
    SCHEMA_VERSION,
    data_model_from_value,
    data_model_to_value,
    deserialize_ir,
    dumps_canonical,
    element_from_value,
    element_to_value,
    loads_strict,
    serialize_ir,
    skeleton_from_value,
    skeleton_to_value,
    storyboard_from_value,
    storyboard_to_value,
)
from .validate import validate_data_model, validate_project, validate_storyboard

__all__ = [
    "AddConnection",
    "AddScreen",
    "CONTAINER_KINDS",
    "DataEntity",
    "DataModel",
    "EntityField",
    "Finding",
    "GuiSkeleton",
    "KIND_DATAMODEL",
    "KIND_SKELETON",
    "KIND_STORYBOARD",
    "LEAF_KINDS",
    "NavigateAction",
    "RemoveConnection",
    "RemoveScreen",
    "SCHEMA_VERSION",
    "SEVERITY_ERROR",
    "SEVERITY_WARNING",
    "SkeletonElement",
    "Storyboard",
    "StoryboardChange",
    "StoryboardNode",
    "ValidationReport",
    "apply_storyboard_change",
    "data_model_from_value",
    "data_model_to_value",
    "derive_view_name",
    "deserialize_ir",
    "dumps_canonical",
    "element_from_value",
    "element_to_value",
    "is_valid_view_name",
    "loads_strict",
    "reachable_nodes",
    "serialize_ir",
    "skeleton_from_value",
    "skeleton_pseudocode",
    "skeleton_to_value",
    "storyboard_from_value",
    "storyboard_to_value",
    "validate_data_model",
    "validate_project",
    "validate_storyboard",
]
