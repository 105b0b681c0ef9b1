"""
weakslit: weak-value trajectories of option prices treated as a double-slit experiment.
"""
from weakslit.core.config import settings

__version__ = settings.VERSION
