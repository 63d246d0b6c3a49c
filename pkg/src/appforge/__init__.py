"""Chat-driven multi-screen app builder.

A request is decomposed into a change plan, the plan mutates three
inter-dependent representations in dependency order (storyboard, data
model, GUI skeletons), and the representations are lowered into a
multi-file SwiftUI source project whose navigation is statically checked
against the storyboard.
"""

__version__ = "0.1.0"
