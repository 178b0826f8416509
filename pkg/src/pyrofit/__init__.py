"""pyrofit: scores a live pose stream against a demonstration track and
rewards correct motion with choreographed, deterministically simulated
fireworks.
"""

__version__ = "0.1.0"
