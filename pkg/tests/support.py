"""Shared fixture builders: response JSON shaped like model output, random
IR generators for fuzz corpora, and small Swift-ish code builders."""

from __future__ import annotations

import json
import random
from typing import Any, Sequence

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

# --------------------------------------------------------------------------
# Response-shaped JSON builders (what a model reply looks like)
# --------------------------------------------------------------------------


def node_value(node_id: int, name: str, view: str, edges: Sequence[int] = (), desc: str = "") -> dict:
    return {
        "id": node_id,
        "name": name,
        "description": desc or f"The {name} screen.",
        "swiftUIViewName": view,
        "outgoingEdges": list(edges),
    }


def storyboard_response(nodes: list[dict], description: str = "Test app.", wrap: bool = True) -> str:
    body = {"description": description, "nodes": nodes}
    if wrap:
        return json.dumps({"storyboard": body, "explanation": "The storyboard represents the app."})
    return json.dumps(body)


def entity_value(name: str, fields: dict[str, str], doc: str = "") -> dict:
    return {
        "name": name,
        "doc": doc or f"{name} record.",
        "fields": [{"name": k, "type": v} for k, v in fields.items()],
        "sourceText": "struct %s {\n%s}\n"
        % (name, "".join(f"    var {k}: {v}\n" for k, v in fields.items())),
    }


def datamodel_response(entities: list[dict]) -> str:
    return json.dumps({"entities": entities})


def nav_button(label: str, dest: str) -> dict:
    return {"Button": {"Label": label, "OnTap": {"Navigate": {"Destination": dest}}}}


def skeleton_response(
    view: str,
    node_id: int,
    dests: Sequence[str] = (),
    text_values: Sequence[str] = (),
    state: Sequence[str] = ("items",),
) -> str:
    elements: list[dict] = [{"Text": {"Value": v}} for v in text_values]
    elements.extend(nav_button(f"Open {d}", d) for d in dests)
    if not elements:
        elements = [{"Text": {"Value": f"{view} content"}}]
    return json.dumps(
        {
            "viewName": view,
            "id": node_id,
            "guiSkeleton": {
                "StateVariables": list(state),
                "Layout": {
                    "MainContainer": {"Elements": elements},
                    "Navigation": {"NavigationBar": {"Title": view.removesuffix("View")}},
                },
            },
        }
    )


def navplan_response(transitions: dict[str, list[tuple[str, str]]], sb_nodes: list[dict]) -> str:
    """transitions: source view -> [(destination view, type)]."""
    views = []
    for raw in sb_nodes:
        view = raw["swiftUIViewName"]
        views.append(
            {
                "id": raw["id"],
                "name": raw["name"],
                "swiftUIViewName": view,
                "transitions": [
                    {
                        "destination": dest,
                        "type": ttype,
                        "trigger": f"on{dest}Tap",
                        "dataPass": {"items": []},
                    }
                    for dest, ttype in transitions.get(view, [])
                ],
            }
        )
    return json.dumps({"views": views})


def design_system_value() -> dict:
    return {
        "colors": {
            "primary": "#F0F0F0",
            "secondary": "#1DB954",
            "accent": "#FF5733",
            "neutral": {"dark": "#333333", "medium": "#777777", "light": "#BBBBBB"},
        },
        "typography": {
            "font": "SF Pro Display",
            "h1": {"weight": "Bold", "size": 36},
            "h2": {"weight": "SemiBold", "size": 28},
            "body": {"weight": "Regular", "size": 16},
            "caption": {"weight": "Regular", "size": 12},
        },
        "components": {
            "button": {
                "standard": {"bgColor": "#1DB954", "textColor": "#FFFFFF", "radius": 8},
                "primary": {"bgColor": "#FF5733", "textColor": "#FFFFFF", "radius": 12},
            },
            "navBar": {
                "bgColor": "#F0F0F0",
                "title": {"fontSize": 18, "color": "#333333"},
                "button": {"fontSize": 16, "color": "#1DB954"},
            },
            "tabBar": {
                "bgColor": "#F0F0F0",
                "iconColor": "#777777",
                "selectedColor": "#1DB954",
                "labelFontSize": 12,
            },
            "card": {
                "bgColor": "#FFFFFF",
                "radius": 10,
                "shadow": {"color": "#000000", "opacity": 0.1, "offsetY": 4, "blur": 6},
            },
        },
        "icons": {
            "style": "Minimal line icons",
            "sizes": [24, 32],
            "system": ["play.circle", "pause.circle", "gear", "music.note"],
        },
        "animations": {
            "duration": "0.25s",
            "easing": "ease-in-out",
            "style": "slide screens, fade content",
        },
    }


def wireframe_value() -> dict:
    return {
        "storyboard": {
            "description": "Fashion-forward shoe marketplace app.",
            "nodes": [
                {
                    "id": 1,
                    "name": "Home",
                    "description": "This is the home screen...",
                    "swiftUIViewName": "HomeView",
                    "outgoingEdges": [2],
                },
                {
                    "id": 2,
                    "name": "Product Detail",
                    "description": "This screen shows...",
                    "swiftUIViewName": "ProductDetailView",
                    "outgoingEdges": [1],
                },
            ],
        },
        "explanation": "The storyboard represents...",
    }


def notes_skeleton_value() -> dict:
    return {
        "viewName": "NotesListView",
        "id": 1,
        "guiSkeleton": {
            "StateVariables": ["notes"],
            "Layout": {
                "MainContainer": {
                    "Elements": [
                        {
                            "List": {
                                "DataSource": "notes",
                                "Elements": [
                                    {
                                        "HStack": {
                                            "Elements": [
                                                {"Text": {"Value": "note.title"}},
                                                {
                                                    "Button": {
                                                        "Label": "Edit",
                                                        "OnTap": {
                                                            "Navigate": {"Destination": "EditNoteView"}
                                                        },
                                                    }
                                                },
                                            ]
                                        }
                                    }
                                ],
                            }
                        },
                        {
                            "Button": {
                                "Label": "Add Note",
                                "OnTap": {"Navigate": {"Destination": "AddNoteView"}},
                            }
                        },
                    ]
                },
                "Navigation": {"NavigationBar": {"Title": "My Notes"}},
            },
        },
    }


def appendix_plan_value() -> dict:
    return {
        "changeType": "guiSkeleton",
        "storyboardChanges": {
            "addScreens": [{"id": 101, "name": "UserProfileView"}],
            "removeScreens": [{"id": 50, "name": "OldSettingsView"}],
            "addConnections": [{"from": 101, "to": 102}],
            "removeConnections": [{"from": 50, "to": 51}],
        },
        "guiSkeletonChanges": {
            "filesToModify": [{"swiftUIViewName": "UserProfileView", "id": 101}],
            "newFilesToCreate": [{"swiftUIViewName": "UserDetailsView", "id": 102}],
            "filesToDelete": [{"swiftUIViewName": "OldSettingsView", "id": 50}],
        },
        "dataModelChanges": {
            "filesToModify": [
                {"swiftUIViewName": "UserModel", "id": 201},
                {"swiftUIViewName": "UserService", "id": 202},
            ]
        },
        "technicalDescription": {"summary": "Added user age support; Removed OldSettingsView."},
    }


def plan_response(
    change_type: str = "mixed",
    add_screens: list[dict] | None = None,
    remove_screens: list[dict] | None = None,
    add_connections: list[dict] | None = None,
    remove_connections: list[dict] | None = None,
    files_to_modify: list[dict] | None = None,
    new_files: list[dict] | None = None,
    files_to_delete: list[dict] | None = None,
    dm_files: list[dict] | None = None,
    summary: str = "Do the thing.",
) -> str:
    return json.dumps(
        {
            "changeType": change_type,
            "storyboardChanges": {
                "addScreens": add_screens or [],
                "removeScreens": remove_screens or [],
                "addConnections": add_connections or [],
                "removeConnections": remove_connections or [],
            },
            "guiSkeletonChanges": {
                "filesToModify": files_to_modify or [],
                "newFilesToCreate": new_files or [],
                "filesToDelete": files_to_delete or [],
            },
            "dataModelChanges": {"filesToModify": dm_files or []},
            "technicalDescription": {"summary": summary},
        }
    )


# --------------------------------------------------------------------------
# Swift-ish source builders for the navigation checker
# --------------------------------------------------------------------------


def view_code(
    view: str,
    links: Sequence[str] = (),
    comments: Sequence[str] = (),
    container: bool = True,
    body_lines: Sequence[str] = (),
    pad_to: int | None = None,
) -> str:
    lines = ["import SwiftUI", "", f"struct {view}: View {{", "    var body: some View {"]
    opened = 0
    if container:
        lines.append("        NavigationStack {")
        opened = 1
    indent = "            " if container else "        "
    lines.append(f"{indent}VStack(spacing: 12) {{")
    lines.append(f'{indent}    Text("{view.removesuffix("View")}")')
    for extra in body_lines:
        lines.append(f"{indent}    {extra}")
    for dest in links:
        lines.append(
            f'{indent}    NavigationLink("Open {dest.removesuffix("View")}", destination: {dest}())'
        )
    for comment in comments:
        lines.append(f"{indent}    // {comment}")
    lines.append(f"{indent}}}")
    for _ in range(opened):
        lines.append("        }")
    lines.append("    }")
    lines.append("}")
    if pad_to is not None:
        while len(lines) < pad_to:
            lines.append("")
    return "\n".join(lines) + "\n"


def codegen_response(views: list[dict], utilities: list[dict] | None = None) -> str:
    return json.dumps({"views": views, "utilities": utilities or []})


def generated_view_value(node_id: int, name: str, view: str, code: str) -> dict:
    return {"id": node_id, "name": name, "swiftUIViewName": view, "viewCode": code}


# --------------------------------------------------------------------------
# Scripted end-to-end fixtures
# --------------------------------------------------------------------------

FINANCE_PROMPT = (
    "Please create a finance management app tailored specifically for informal "
    "community savings groups (partnerships) in Jamaica. It should allow users to "
    "easily track weekly payments, clearly highlight outstanding contributions, and "
    "visually display the rotation order for payouts. Let's start with login/sign up "
    "flows, payout schedules, participant management, and payment tracking."
)

FINANCE_NODES = [
    node_value(1, "Login", "LoginView", (2,), "Sign in to the partnership."),
    node_value(2, "Home", "HomeView", (3, 4, 5), "Overview of the partnership."),
    node_value(3, "Payout Schedule", "PayoutScheduleView", (), "Rotation order for payouts."),
    node_value(4, "Participants", "ParticipantsView", (), "Manage members."),
    node_value(5, "Payment Tracking", "PaymentTrackingView", (), "Weekly payment status."),
]


def finance_initial_rules() -> "list":
    from appforge.gateway import ScriptRule

    rules = [
        ScriptRule(
            match=["designing the initial storyboard"],
            response=storyboard_response(FINANCE_NODES, "Partnership savings manager."),
        ),
        ScriptRule(match=["design scaffold"], response=json.dumps(design_system_value())),
        ScriptRule(
            match=["update the data model", "initial data model"],
            response=datamodel_response(
                [
                    entity_value("Partnership", {"name": "String", "weeklyAmount": "Double"}),
                    entity_value("Participant", {"name": "String", "paidUp": "Bool"}),
                    entity_value("Payment", {"amount": "Double", "date": "Date"}),
                ]
            ),
            once=True,
        ),
        ScriptRule(
            match=["navigation plan"],
            response=navplan_response(
                {
                    "LoginView": [("HomeView", "push")],
                    "HomeView": [
                        ("PayoutScheduleView", "push"),
                        ("ParticipantsView", "push"),
                        ("PaymentTrackingView", "sheet"),
                    ],
                },
                FINANCE_NODES,
            ),
        ),
    ]
    edge_map = {
        "LoginView": ("HomeView",),
        "HomeView": ("PayoutScheduleView", "ParticipantsView", "PaymentTrackingView"),
        "PayoutScheduleView": (),
        "ParticipantsView": (),
        "PaymentTrackingView": (),
    }
    for raw in FINANCE_NODES:
        view = raw["swiftUIViewName"]
        rules.append(
            ScriptRule(
                match=[f"GUI skeleton for screen {view}"],
                response=skeleton_response(view, raw["id"], dests=edge_map[view]),
            )
        )
    return rules


def finance_signup_rules() -> "list":
    """Follow-up request: add a sign up screen between login and home."""
    from appforge.gateway import ScriptRule

    signup_plan = plan_response(
        change_type="storyboard",
        add_screens=[{"id": 106, "name": "SignUpView"}],
        add_connections=[{"from": 1, "to": 106}, {"from": 106, "to": 2}],
        new_files=[{"swiftUIViewName": "SignUpView", "id": 106}],
        summary="Added a sign up screen to the flow.",
    )
    new_nodes = [
        node_value(1, "Login", "LoginView", (2, 6), "Sign in to the partnership."),
        node_value(2, "Home", "HomeView", (3, 4, 5), "Overview of the partnership."),
        node_value(3, "Payout Schedule", "PayoutScheduleView", (), "Rotation order for payouts."),
        node_value(4, "Participants", "ParticipantsView", (), "Manage members."),
        node_value(5, "Payment Tracking", "PaymentTrackingView", (), "Weekly payment status."),
        node_value(6, "Sign Up", "SignUpView", (2,), "Create a partnership account."),
    ]
    return [
        ScriptRule(match=["Decompose the request", "sign up"], response=signup_plan),
        ScriptRule(
            match=["New screens needing names"],
            response=storyboard_response(new_nodes, "Partnership savings manager.", wrap=False),
            once=True,
        ),
        ScriptRule(
            match=["GUI skeleton for screen SignUpView"],
            response=skeleton_response("SignUpView", 6, dests=("HomeView",)),
        ),
        ScriptRule(
            match=["GUI skeleton for screen LoginView"],
            response=skeleton_response("LoginView", 1, dests=("HomeView", "SignUpView")),
        ),
    ]


FINANCE_EDGES_AFTER_SIGNUP = {
    "LoginView": ("HomeView", "SignUpView"),
    "HomeView": ("PayoutScheduleView", "ParticipantsView", "PaymentTrackingView"),
    "PayoutScheduleView": (),
    "ParticipantsView": (),
    "PaymentTrackingView": (),
    "SignUpView": ("HomeView",),
}


def finance_codegen_rule() -> "object":
    from appforge.gateway import ScriptRule

    views = []
    ids = {
        "LoginView": 1,
        "HomeView": 2,
        "PayoutScheduleView": 3,
        "ParticipantsView": 4,
        "PaymentTrackingView": 5,
        "SignUpView": 6,
    }
    for view, links in FINANCE_EDGES_AFTER_SIGNUP.items():
        views.append(
            generated_view_value(ids[view], view.removesuffix("View"), view, view_code(view, links=links))
        )
    response = codegen_response(views)
    return ScriptRule(match=["Generate the complete SwiftUI source"], response=response)


SHOP_NODES = [
    node_value(1, "Home", "HomeView", (2,), "This is the home screen..."),
    node_value(2, "ProductDetail", "ProductDetailView", (3,), "This screen shows..."),
    node_value(3, "Purchase", "PurchaseView", (), "Checkout flow."),
]


def shop_view_code(view: str, links: tuple[str, ...]) -> str:
    return view_code(view, links=links)


def shop_codegen_value() -> dict:
    """Three views plus a color utility; ids echo the unassigned-id quirk
    (Purchase comes back with id 0)."""
    return {
        "views": [
            generated_view_value(1, "Home", "HomeView", shop_view_code("HomeView", ("ProductDetailView",))),
            generated_view_value(
                2,
                "ProductDetail",
                "ProductDetailView",
                shop_view_code("ProductDetailView", ("PurchaseView",)),
            ),
            generated_view_value(0, "Purchase", "PurchaseView", shop_view_code("PurchaseView", ())),
        ],
        "utilities": [
            {
                "name": "Color+Extension",
                "code": "import SwiftUI\n\nextension Color {\n    init(hex: String) {\n        self = .accentColor\n    }\n}\n",
            }
        ],
    }


# --------------------------------------------------------------------------
# Random IR generators (seeded) for round-trip corpora and oracles
# --------------------------------------------------------------------------

_WORDS = (
    "alpha", "bravo", "cargo", "delta", "ember", "flint", "gala", "harbor",
    "iris", "juno", "koa", "lumen", "mesa", "nova", "onyx", "pax",
)


def _word(rng: random.Random) -> str:
    return rng.choice(_WORDS) + str(rng.randrange(100))


def random_storyboard(rng: random.Random, max_nodes: int = 8) -> Storyboard:
    count = rng.randrange(0, max_nodes + 1)
    ids = rng.sample(range(1, 40), count)
    nodes = []
    for node_id in ids:
        others = [i for i in ids if i != node_id]
        rng.shuffle(others)
        edges = tuple(others[: rng.randrange(0, len(others) + 1)])
        word = _word(rng)
        nodes.append(
            StoryboardNode(
                id=node_id,
                name=word.title(),
                description=f"Screen about {word}.",
                swift_ui_view_name=f"{word.title()}{node_id}View",
                outgoing_edges=edges,
            )
        )
    entry = rng.choice(ids) if ids and rng.random() < 0.5 else None
    return Storyboard(description=f"App {_word(rng)}", nodes=tuple(nodes), entry_node_id=entry)


def random_data_model(rng: random.Random, max_entities: int = 5) -> DataModel:
    names = rng.sample(["Note", "Track", "Order", "Spot", "Badge", "Trip", "Goal"], rng.randrange(0, max_entities))
    entities = []
    for name in names:
        field_names = rng.sample(["id", "title", "amount", "createdAt", "owner", "done"], rng.randrange(1, 5))
        fields = tuple(
            EntityField(f, rng.choice(["String", "Int", "Double", "Bool", "Date"])) for f in field_names
        )
        entities.append(
            DataEntity(
                name=name,
                doc=f"{name} data.",
                fields=fields,
                source_text="" if rng.random() < 0.5 else f"struct {name} {{}}\n",
            )
        )
    return DataModel(entities=tuple(entities))


def _random_element(rng: random.Random, depth: int, dests: Sequence[str]) -> SkeletonElement:
    containers = ["MainContainer", "List", "HStack", "VStack", "Navigation"]
    leaves = ["Text", "Button", "Image", "TextField", "Gauge"]
    if depth <= 0 or rng.random() < 0.5:
        kind = rng.choice(leaves)
        attributes: dict[str, str] = {}
        if rng.random() < 0.7:
            attributes["Value"] = _word(rng)
        if kind == "Button":
            attributes["Label"] = _word(rng).title()
        action = None
        roll = rng.random()
        if roll < 0.3 and dests:
            action = NavigateAction(rng.choice(list(dests)))
        elif roll < 0.5:
            action = f"describe {_word(rng)}"
        return SkeletonElement(kind=kind, attributes=attributes, action=action)
    kind = rng.choice(containers)
    attributes = {"DataSource": _word(rng)} if kind == "List" else {}
    children = tuple(_random_element(rng, depth - 1, dests) for _ in range(rng.randrange(1, 4)))
    return SkeletonElement(kind=kind, attributes=attributes, children=children)


def random_skeleton(
    rng: random.Random, view: str = "", node_id: int = 0, dests: Sequence[str] = ()
) -> GuiSkeleton:
    return GuiSkeleton(
        view_name=view or f"{_word(rng).title()}View",
        node_id=node_id or rng.randrange(1, 30),
        state_variables=tuple(_word(rng) for _ in range(rng.randrange(0, 3))),
        layout=SkeletonElement(
            kind="MainContainer",
            children=tuple(_random_element(rng, 2, dests) for _ in range(rng.randrange(1, 4))),
        ),
    )
