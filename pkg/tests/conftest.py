import hypothesis

hypothesis.settings.register_profile(
    "cotrend",
    deadline=None,
    derandomize=True,
    max_examples=60,
)
hypothesis.settings.load_profile("cotrend")
