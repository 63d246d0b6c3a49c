"""One-off generator for the Pincast batch fixture.

Builds script.json + responses.json for a podcast discovery app: four
initial screens, a signup/login change request, and generated code seeded
with exactly 2 missing-link and 4 comment navigation defects across 402
total lines. Run from the repo root; verifies its own output.
"""

from __future__ import annotations

import json
from pathlib import Path

HERE = Path(__file__).parent / "pincast"

INITIAL_PROMPT = (
    "Create podcast discovery and curation app that takes inspiration from "
    "Pinterest's visual layout and social features, but focuses entirely on "
    "audio content."
)
CHANGE_PROMPT = "Add a signup/login flow and connect it to the home view"

INITIAL_NODES = [
    {
        "id": 1,
        "name": "Home",
        "description": "Visual grid of trending podcasts.",
        "swiftUIViewName": "HomeView",
        "outgoingEdges": [2, 4],
    },
    {
        "id": 2,
        "name": "Podcast Detail",
        "description": "Episodes and details for one show.",
        "swiftUIViewName": "PodcastDetailView",
        "outgoingEdges": [3],
    },
    {
        "id": 3,
        "name": "Player",
        "description": "Playback with artwork and controls.",
        "swiftUIViewName": "PlayerView",
        "outgoingEdges": [1],
    },
    {
        "id": 4,
        "name": "Boards",
        "description": "Pinboards of curated episodes.",
        "swiftUIViewName": "BoardsView",
        "outgoingEdges": [2],
    },
]

FINAL_NODES = INITIAL_NODES + [
    {
        "id": 5,
        "name": "Login",
        "description": "Sign in with email to sync boards.",
        "swiftUIViewName": "LoginView",
        "outgoingEdges": [1, 6],
    },
    {
        "id": 6,
        "name": "Signup",
        "description": "Create an account for curation features.",
        "swiftUIViewName": "SignupView",
        "outgoingEdges": [1],
    },
]


def design_system() -> dict:
    return {
        "colors": {
            "primary": "#1A1A2E",
            "secondary": "#E94560",
            "accent": "#0F3460",
            "neutral": {"dark": "#16213E", "medium": "#53577A", "light": "#E3E4F1"},
        },
        "typography": {
            "font": "SF Pro Rounded",
            "h1": {"weight": "Bold", "size": 34},
            "h2": {"weight": "SemiBold", "size": 26},
            "body": {"weight": "Regular", "size": 16},
            "caption": {"weight": "Regular", "size": 12},
        },
        "components": {
            "button": {"standard": {"bgColor": "#E94560", "textColor": "#FFFFFF", "radius": 10}},
            "navBar": {"bgColor": "#1A1A2E", "title": {"fontSize": 18, "color": "#E3E4F1"}},
            "tabBar": {
                "bgColor": "#16213E",
                "iconColor": "#53577A",
                "selectedColor": "#E94560",
                "labelFontSize": 11,
            },
            "card": {
                "bgColor": "#16213E",
                "radius": 14,
                "shadow": {"color": "#000000", "opacity": 0.25, "offsetY": 6, "blur": 12},
            },
        },
        "icons": {
            "style": "Rounded line icons",
            "sizes": [22, 30],
            "system": ["waveform", "pin.fill", "play.circle.fill", "person.crop.circle"],
        },
        "animations": {
            "duration": "0.3s",
            "easing": "ease-out",
            "style": "cards lift on tap, crossfade between screens",
        },
    }


def entity(name: str, doc: str, fields: dict[str, str]) -> dict:
    return {
        "name": name,
        "doc": doc,
        "fields": [{"name": k, "type": v} for k, v in fields.items()],
        "sourceText": "struct %s {\n%s}\n" % (name, "".join(f"    var {k}: {v}\n" for k, v in fields.items())),
    }


BASE_ENTITIES = [
    entity("Podcast", "One show in the catalog.", {"id": "UUID", "title": "String", "author": "String", "artworkURL": "String"}),
    entity("Episode", "A playable episode.", {"id": "UUID", "title": "String", "duration": "Int", "podcastID": "UUID"}),
    entity("Board", "A user-curated pinboard.", {"id": "UUID", "name": "String", "episodeIDs": "[UUID]"}),
]
ACCOUNT_ENTITY = entity(
    "UserAccount", "Signed-in listener.", {"id": "UUID", "email": "String", "displayName": "String"}
)


def skeleton(view: str, node_id: int, dests: list[str], texts: list[str]) -> dict:
    elements = [{"Text": {"Value": t}} for t in texts]
    elements += [
        {"Button": {"Label": f"Open {d.removesuffix('View')}", "OnTap": {"Navigate": {"Destination": d}}}}
        for d in dests
    ]
    return {
        "viewName": view,
        "id": node_id,
        "guiSkeleton": {
            "StateVariables": ["items"],
            "Layout": {
                "MainContainer": {"Elements": elements},
                "Navigation": {"NavigationBar": {"Title": view.removesuffix("View")}},
            },
        },
    }


def nav_plan() -> dict:
    transitions = {
        "HomeView": [("PodcastDetailView", "push"), ("BoardsView", "push")],
        "PodcastDetailView": [("PlayerView", "fullScreen")],
        "PlayerView": [("HomeView", "push")],
        "BoardsView": [("PodcastDetailView", "push")],
    }
    return {
        "views": [
            {
                "id": n["id"],
                "name": n["name"],
                "swiftUIViewName": n["swiftUIViewName"],
                "transitions": [
                    {"destination": d, "type": t, "trigger": f"on{d}Tap", "dataPass": {"items": []}}
                    for d, t in transitions.get(n["swiftUIViewName"], [])
                ],
            }
            for n in INITIAL_NODES
        ]
    }


def plan_change() -> dict:
    return {
        "changeType": "mixed",
        "storyboardChanges": {
            "addScreens": [{"id": 101, "name": "LoginView"}, {"id": 102, "name": "SignupView"}],
            "removeScreens": [],
            "addConnections": [
                {"from": 101, "to": 1},
                {"from": 101, "to": 102},
                {"from": 102, "to": 1},
            ],
            "removeConnections": [],
        },
        "guiSkeletonChanges": {
            "filesToModify": [],
            "newFilesToCreate": [
                {"swiftUIViewName": "LoginView", "id": 101},
                {"swiftUIViewName": "SignupView", "id": 102},
            ],
            "filesToDelete": [],
        },
        "dataModelChanges": {"filesToModify": [{"swiftUIViewName": "UserAccount", "id": 201}]},
        "technicalDescription": {"summary": "Added a signup/login flow connected to the home view."},
    }


# --------------------------------------------------------------------------
# Generated Swift sources (seeded navigation defects)
# --------------------------------------------------------------------------

HOME_CODE = """\
import SwiftUI

struct HomeView: View {
    @State private var trending: [Podcast] = []
    @State private var searchText = ""

    var body: some View {
        NavigationStack {
            ScrollView {
                LazyVGrid(columns: [GridItem(.adaptive(minimum: 160), spacing: 14)], spacing: 14) {
                    ForEach(trending, id: \\.id) { podcast in
                        NavigationLink("Open show", destination: PodcastDetailView(podcast: podcast))
                            .buttonStyle(.plain)
                    }
                }
                .padding(.horizontal, 16)
            }
            .searchable(text: $searchText, prompt: "Find a podcast")
            .navigationTitle("Pincast")
            .background(Color(hex: "#1A1A2E"))
            // Navigate to BoardsView from the boards tab item below
            .toolbar {
                ToolbarItem(placement: .bottomBar) {
                    Label("Boards", systemImage: "pin.fill")
                }
            }
        }
    }
}

private struct PodcastCard: View {
    let podcast: Podcast

    var body: some View {
        VStack(alignment: .leading, spacing: 8) {
            AsyncImage(url: URL(string: podcast.artworkURL))
                .frame(height: 140)
                .clipShape(RoundedRectangle(cornerRadius: 14))
            Text(podcast.title)
                .font(.headline)
                .foregroundStyle(Color(hex: "#E3E4F1"))
            Text(podcast.author)
                .font(.caption)
                .foregroundStyle(Color(hex: "#53577A"))
        }
        .padding(10)
        .background(Color(hex: "#16213E"))
        .clipShape(RoundedRectangle(cornerRadius: 14))
        .shadow(color: .black.opacity(0.25), radius: 12, y: 6)
    }
}
"""

DETAIL_CODE = """\
import SwiftUI

struct PodcastDetailView: View {
    let podcast: Podcast
    @State private var episodes: [Episode] = []
    @State private var showShare = false

    var body: some View {
        NavigationStack {
            List {
                Section {
                    header
                }
                Section("Episodes") {
                    ForEach(episodes, id: \\.id) { episode in
                        EpisodeRow(episode: episode)
                    }
                }
            }
            .listStyle(.insetGrouped)
            .navigationTitle(podcast.title)
            .sheet(isPresented: $showShare) { ShareOptions() }
        }
    }

    private var header: some View {
        HStack(spacing: 12) {
            AsyncImage(url: URL(string: podcast.artworkURL))
                .frame(width: 84, height: 84)
                .clipShape(RoundedRectangle(cornerRadius: 14))
            VStack(alignment: .leading, spacing: 4) {
                Text(podcast.title).font(.title3.weight(.semibold))
                Text(podcast.author).font(.caption)
            }
        }
    }
}

private struct EpisodeRow: View {
    let episode: Episode

    var body: some View {
        HStack {
            Image(systemName: "play.circle.fill")
                .foregroundStyle(Color(hex: "#E94560"))
            VStack(alignment: .leading) {
                Text(episode.title).font(.body)
                Text("\\(episode.duration / 60) min").font(.caption2)
            }
            Spacer()
            Image(systemName: "pin")
        }
    }
}

private struct ShareOptions: View {
    var body: some View {
        Text("Share this show")
            .font(.headline)
            .padding(24)
    }
}
"""

PLAYER_CODE = """\
import SwiftUI

struct PlayerView: View {
    @State private var progress = 0.35
    @State private var isPlaying = true

    var body: some View {
        VStack(spacing: 24) {
            RoundedRectangle(cornerRadius: 18)
                .fill(Color(hex: "#16213E"))
                .frame(width: 280, height: 280)
                .overlay(Image(systemName: "waveform").font(.system(size: 64)))
            VStack(spacing: 6) {
                Text("Deep Dive Radio").font(.title2.weight(.bold))
                Text("Episode 42 - Night Frequencies").font(.subheadline)
            }
            Slider(value: $progress)
                .tint(Color(hex: "#E94560"))
            HStack(spacing: 44) {
                Image(systemName: "gobackward.15").font(.title2)
                Button {
                    isPlaying.toggle()
                } label: {
                    Image(systemName: isPlaying ? "pause.circle.fill" : "play.circle.fill")
                        .font(.system(size: 58))
                }
                Image(systemName: "goforward.30").font(.title2)
            }
            // navigation back to HomeView happens from the dismiss control
            Text("Up next: community picks")
                .font(.caption)
                .foregroundStyle(Color(hex: "#53577A"))
        }
        .padding(28)
        .background(Color(hex: "#1A1A2E").ignoresSafeArea())
    }
}
"""

BOARDS_CODE = """\
import SwiftUI

struct BoardsView: View {
    @State private var boards: [Board] = []

    var body: some View {
        NavigationStack {
            ScrollView {
                LazyVStack(spacing: 14) {
                    ForEach(boards, id: \\.id) { board in
                        BoardCard(board: board)
                    }
                    NavigationLink("Browse pinned episodes", destination: EmptyView())
                        .buttonStyle(.borderedProminent)
                        .tint(Color(hex: "#E94560"))
                }
                .padding(16)
            }
            .navigationTitle("Your boards")
            .background(Color(hex: "#1A1A2E"))
        }
    }
}

private struct BoardCard: View {
    let board: Board

    var body: some View {
        VStack(alignment: .leading, spacing: 10) {
            Text(board.name)
                .font(.headline)
            Text("\\(board.episodeIDs.count) pinned episodes")
                .font(.caption)
                .foregroundStyle(Color(hex: "#53577A"))
        }
        .frame(maxWidth: .infinity, alignment: .leading)
        .padding(14)
        .background(Color(hex: "#16213E"))
        .clipShape(RoundedRectangle(cornerRadius: 14))
    }
}
"""

LOGIN_CODE = """\
import SwiftUI

struct LoginView: View {
    @State private var email = ""
    @State private var password = ""

    var body: some View {
        NavigationStack {
            VStack(spacing: 18) {
                Image(systemName: "waveform")
                    .font(.system(size: 52))
                    .foregroundStyle(Color(hex: "#E94560"))
                Text("Welcome back")
                    .font(.largeTitle.weight(.bold))
                TextField("Email", text: $email)
                    .textFieldStyle(.roundedBorder)
                SecureField("Password", text: $password)
                    .textFieldStyle(.roundedBorder)
                Button("Log in") {
                    // Navigate to HomeView after successful login
                }
                .buttonStyle(.borderedProminent)
                .tint(Color(hex: "#E94560"))
                NavigationLink("Create an account", destination: SignupView())
                    .font(.footnote)
            }
            .padding(26)
            .background(Color(hex: "#1A1A2E").ignoresSafeArea())
        }
    }
}
"""

SIGNUP_CODE = """\
import SwiftUI

struct SignupView: View {
    @State private var email = ""
    @State private var displayName = ""
    @State private var password = ""

    var body: some View {
        NavigationStack {
            VStack(spacing: 16) {
                Text("Join Pincast")
                    .font(.largeTitle.weight(.bold))
                TextField("Display name", text: $displayName)
                    .textFieldStyle(.roundedBorder)
                TextField("Email", text: $email)
                    .textFieldStyle(.roundedBorder)
                SecureField("Password", text: $password)
                    .textFieldStyle(.roundedBorder)
                Button("Create account") {
                    // TODO: navigate to HomeView once the account is created
                }
                .buttonStyle(.borderedProminent)
                .tint(Color(hex: "#E94560"))
                Text("You can pin episodes to boards once signed in.")
                    .font(.caption)
                    .foregroundStyle(Color(hex: "#53577A"))
            }
            .padding(26)
            .background(Color(hex: "#1A1A2E").ignoresSafeArea())
        }
    }
}
"""

UTILITY_BASE = """\
import SwiftUI

extension Color {
    init(hex: String) {
        let cleaned = hex.trimmingCharacters(in: CharacterSet.alphanumerics.inverted)
        var value: UInt64 = 0
        Scanner(string: cleaned).scanHexInt64(&value)
        let red = Double((value >> 16) & 0xFF) / 255
        let green = Double((value >> 8) & 0xFF) / 255
        let blue = Double(value & 0xFF) / 255
        self.init(red: red, green: green, blue: blue)
    }
"""

TARGET_LINES = 402


def build_views() -> list[dict]:
    specs = [
        (1, "Home", "HomeView", HOME_CODE),
        (2, "Podcast Detail", "PodcastDetailView", DETAIL_CODE),
        (3, "Player", "PlayerView", PLAYER_CODE),
        (4, "Boards", "BoardsView", BOARDS_CODE),
        (5, "Login", "LoginView", LOGIN_CODE),
        (0, "Signup", "SignupView", SIGNUP_CODE),
    ]
    return [
        {"id": i, "name": n, "swiftUIViewName": v, "viewCode": c} for i, n, v, c in specs
    ]


def build_utility(views: list[dict]) -> dict:
    view_lines = sum(len(v["viewCode"].splitlines()) for v in views)
    base_lines = len(UTILITY_BASE.splitlines()) + 1  # closing brace line
    pad = TARGET_LINES - view_lines - base_lines
    assert pad >= 0, f"views too long: {view_lines} + {base_lines} > {TARGET_LINES}"
    extras = []
    swatches = [
        ("brand", "#E94560"), ("canvas", "#1A1A2E"), ("cardBase", "#16213E"),
        ("inkLight", "#E3E4F1"), ("inkMuted", "#53577A"), ("accentDeep", "#0F3460"),
    ]
    i = 0
    while len(extras) < pad:
        name, hexv = swatches[i % len(swatches)]
        suffix = "" if i < len(swatches) else str(i // len(swatches) + 1)
        extras.append("")
        extras.append(f"    static let {name}{suffix} = Color(hex: \"{hexv}\")")
        i += 1
    while len(extras) > pad:
        extras.pop()
    code = UTILITY_BASE + "\n".join(extras) + ("\n" if extras else "") + "}\n"
    return {"name": "Color+Extension", "code": code}


def responses() -> dict:
    views = build_views()
    utility = build_utility(views)
    total = sum(len(v["viewCode"].splitlines()) for v in views) + len(utility["code"].splitlines())
    assert total == TARGET_LINES, total

    skeletons = {
        "HomeView": skeleton("HomeView", 1, ["PodcastDetailView", "BoardsView"], ["podcast.title"]),
        "PodcastDetailView": skeleton("PodcastDetailView", 2, ["PlayerView"], ["episode.title"]),
        "PlayerView": skeleton("PlayerView", 3, ["HomeView"], ["episode.title"]),
        "BoardsView": skeleton("BoardsView", 4, ["PodcastDetailView"], ["board.name"]),
        "LoginView": skeleton("LoginView", 5, ["HomeView", "SignupView"], ["Welcome back"]),
        "SignupView": skeleton("SignupView", 6, ["HomeView"], ["Join Pincast"]),
    }

    rules = [
        {
            "match": ["designing the initial storyboard"],
            "response": json.dumps(
                {"storyboard": {"description": "Visual podcast discovery and curation.", "nodes": INITIAL_NODES}}
            ),
        },
        {"match": ["design scaffold"], "response": json.dumps(design_system())},
        {
            "match": ["update the data model", "initial data model"],
            "response": json.dumps({"entities": BASE_ENTITIES}),
            "once": True,
        },
        {
            "match": ["update the data model"],
            "response": json.dumps({"entities": BASE_ENTITIES + [ACCOUNT_ENTITY]}),
        },
        {"match": ["navigation plan"], "response": json.dumps(nav_plan())},
        {"match": ["Decompose the request", "signup"], "response": json.dumps(plan_change())},
        {
            "match": ["New screens needing names"],
            "response": json.dumps(
                {"description": "Visual podcast discovery and curation.", "nodes": FINAL_NODES}
            ),
            "once": True,
        },
    ]
    for view, skel in skeletons.items():
        rules.append({"match": [f"GUI skeleton for screen {view}"], "response": json.dumps(skel)})
    rules.append(
        {
            "match": ["Generate the complete SwiftUI source"],
            "response": json.dumps({"views": views, "utilities": [utility]}),
        }
    )
    return {"kind": "scripted", "rules": rules}


def main() -> None:
    HERE.mkdir(parents=True, exist_ok=True)
    provider = responses()
    script = {
        "initialPrompt": INITIAL_PROMPT,
        "changePrompts": [CHANGE_PROMPT],
        "appName": "Pincast",
        "provider": provider,
    }
    (HERE / "script.json").write_text(json.dumps(script, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {HERE / 'script.json'}")

    views = build_views()
    utility = build_utility(views)
    total = sum(len(v["viewCode"].splitlines()) for v in views) + len(utility["code"].splitlines())
    print(f"total lines: {total}")


if __name__ == "__main__":
    main()
