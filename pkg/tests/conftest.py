from hypothesis import settings

settings.register_profile("afmtsim", deadline=None, max_examples=200)
settings.load_profile("afmtsim")
