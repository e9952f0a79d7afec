"""gogkit: graphs of finite groups, normal forms, derivations, and surgery."""

__version__ = "0.1.0"
