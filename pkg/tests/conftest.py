import hypothesis

# Property tests explore a modest number of examples: every case here drives
# real quadrature, so the default 100 would dominate the suite's runtime.
# derandomize keeps CI reproducible.
hypothesis.settings.register_profile(
    "toolkit",
    max_examples=25,
    deadline=None,
    derandomize=True,
)
hypothesis.settings.load_profile("toolkit")
