from hypothesis import settings

# first call into a jitted kernel pays compilation; per-example deadlines
# are meaningless under that noise
settings.register_profile("onepass", deadline=None)
settings.load_profile("onepass")
