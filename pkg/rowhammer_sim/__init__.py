from __future__ import annotations as __future_annotations__

try:
    from ._version import commit_id, version, version_tuple
except ImportError:
    # Source tree without a build, _version.py is generated by hatch-vcs.
    commit_id = None
    version = "0.0.0"
    version_tuple = (0, 0, 0)

__all__ = [
    "commit_id",
    "version",
    "version_tuple",
]
