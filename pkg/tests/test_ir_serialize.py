from __future__ import annotations

import json
import random

import pytest

from support import (
    notes_skeleton_value,
    random_data_model,
    random_skeleton,
    random_storyboard,
    wireframe_value,
)

from appforge.errors import EngineError
from appforge.ir.model import NavigateAction
from appforge.ir.pseudocode import skeleton_pseudocode
from appforge.ir.serialize import (
    deserialize_ir,
    serialize_ir,
    skeleton_from_value,
    storyboard_from_value,
)


def test_wireframe_parses_and_canonicalizes():
    sb, warnings = storyboard_from_value(wireframe_value())
    assert warnings == []
    assert len(sb.nodes) == 2
    assert sb.nodes[0].swift_ui_view_name == "HomeView"
    assert sb.nodes[1].outgoing_edges == (1,)

    canonical = serialize_ir(sb)
    again = deserialize_ir(canonical, "storyboard")
    assert again == sb
    assert serialize_ir(again) == canonical  # canonical text is a fixed point


def test_empty_object_is_schema_error():
    with pytest.raises(EngineError) as exc:
        deserialize_ir("{}", "storyboard")
    assert exc.value.code == "schema_error"
    assert "nodes" in exc.value.message


def test_malformed_json_reports_offset():
    with pytest.raises(EngineError) as exc:
        deserialize_ir('{"nodes": [', "storyboard")
    assert exc.value.code == "parse_error"
    assert exc.value.offset is not None


def test_nonpositive_id_rejected_when_strict():
    value = {"nodes": [{"id": 0, "name": "X", "swiftUIViewName": "XView"}]}
    with pytest.raises(EngineError) as exc:
        storyboard_from_value(value)
    assert exc.value.code == "schema_error"


def test_lenient_ingestion_assigns_ids_and_renames():
    value = {
        "nodes": [
            {"id": 1, "name": "Home", "swiftUIViewName": "HomeView"},
            {"id": 0, "name": "Purchase", "swiftUIViewName": "HomeView"},
            {"name": "Cart", "swiftUIViewName": "bad name"},
        ]
    }
    sb, warnings = storyboard_from_value(value, lenient=True)
    assert [n.id for n in sb.nodes] == [1, 2, 3]
    names = [n.swift_ui_view_name for n in sb.nodes]
    assert names[0] == "HomeView"
    assert names[1] != "HomeView" and names[1].endswith("View")
    assert names[2] == "BadNameView"
    codes = {w.code for w in warnings}
    assert codes == {"assigned_node_id", "renamed_view"}


def test_notes_skeleton_parses_wrapper_form(notes_data_model):
    skel = skeleton_from_value(notes_skeleton_value())
    assert skel.view_name == "NotesListView"
    assert skel.node_id == 1
    assert skel.state_variables == ("notes",)
    # Multi-key Layout is wrapped under one main container.
    assert skel.layout.kind == "MainContainer"
    kinds = [c.kind for c in skel.layout.children]
    assert kinds == ["MainContainer", "Navigation"]
    assert set(skel.navigate_destinations()) == {"EditNoteView", "AddNoteView"}
    # The Navigation bar shorthand becomes a child element.
    nav = skel.layout.children[1]
    assert nav.children[0].kind == "NavigationBar"
    assert nav.children[0].attributes["Title"] == "My Notes"


def test_skeleton_roundtrip_via_canonical_text():
    skel = skeleton_from_value(notes_skeleton_value())
    text = serialize_ir(skel)
    again = deserialize_ir(text, "skeleton")
    assert again == skel
    assert serialize_ir(again) == text


def test_element_shorthand_string_body():
    skel = skeleton_from_value(
        {"viewName": "XView", "id": 3, "guiSkeleton": {"StateVariables": [], "Layout": {"Text": "Hello"}}}
    )
    assert skel.layout.kind == "Text"
    assert skel.layout.attributes == {"Value": "Hello"}


def test_action_string_is_preserved():
    skel = skeleton_from_value(
        {
            "viewName": "XView",
            "id": 3,
            "guiSkeleton": {
                "StateVariables": [],
                "Layout": {"Button": {"Label": "Save", "OnTap": "persist the draft note"}},
            },
        }
    )
    assert skel.layout.action == "persist the draft note"
    again = deserialize_ir(serialize_ir(skel), "skeleton")
    assert again.layout.action == "persist the draft note"


def test_datamodel_field_map_form():
    dm = deserialize_ir(json.dumps({"entities": [{"name": "Progress", "fields": {"title": "String", "percentage": "Double"}}]}), "datamodel")
    assert dm.entities[0].fields[1].type_text == "Double"
    text = serialize_ir(dm)
    assert deserialize_ir(text, "datamodel") == dm


def test_fuzzed_roundtrip_corpus():
    cases = 0
    for seed in range(60):
        rng = random.Random(seed)
        for value in (
            random_storyboard(rng),
            random_data_model(rng),
            random_skeleton(rng, dests=("AView", "BView")),
        ):
            text = serialize_ir(value)
            kind = {"Storyboard": "storyboard", "DataModel": "datamodel", "GuiSkeleton": "skeleton"}[
                type(value).__name__
            ]
            again = deserialize_ir(text, kind)
            assert again == value, f"seed {seed} {kind}"
            assert serialize_ir(again) == text
            cases += 1
    assert cases >= 150


def test_pseudocode_renders_tree():
    skel = skeleton_from_value(notes_skeleton_value())
    text = skeleton_pseudocode(skel)
    assert "screen NotesListView (node 1)" in text
    assert "state: notes" in text
    assert "-> EditNoteView" in text
    assert 'List(DataSource: "notes")' in text


def test_navigate_shorthand_accepted():
    skel = skeleton_from_value(
        {
            "viewName": "XView",
            "id": 1,
            "guiSkeleton": {
                "StateVariables": [],
                "Layout": {"Button": {"OnTap": {"Navigate": "HomeView"}}},
            },
        }
    )
    assert skel.layout.action == NavigateAction("HomeView")
