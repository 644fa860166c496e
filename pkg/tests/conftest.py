from hypothesis import settings

# Property tests here are numerically cheap but run on shared, sometimes
# slow machines; wall-clock deadlines only add flakiness.
settings.register_profile("pointtrack", deadline=None)
settings.load_profile("pointtrack")
