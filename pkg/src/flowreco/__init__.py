"""flowreco: crash-recovery engine over a simulated app runtime.

Submodules:
    viewtree  UI tree model, hit testing, canonical digests
    vpath     selector language (parser, evaluator, unique-selector synthesis)
    flow      stage-graph user flows and the run-time tracker
    replay    record replay with the timeout/ambiguity abort contract
    simapp    deterministic simulated app runtime and traces
    ssi       versioned service interfaces, parcel codec, translation packs
    compat    crash detection, launch routing, compatibility-mode recovery
    sweep     crash-sweep confusion-matrix evaluation
    service   local HTTP/WebSocket API for authoring tools
    cli       command-line entry points
"""

__version__ = "0.1.0"
