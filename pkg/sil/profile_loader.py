"""
SIL — Profile Loader

Loads, validates, and manages JSON run profiles: search budgets, suite
parameters, memory limits and output format.
"""

import json
import os
from typing import Callable, Optional

REQUIRED_KEYS = {"schemaVersion", "profileId", "budget", "suite", "limits", "output"}


class ProfileLoadError(Exception):
    """Raised when a profile file cannot be loaded or fails validation."""
    pass


class Profile:
    """A loaded and validated run profile."""

    def __init__(self, data: dict):
        self.data = data
        self.profile_id: str = data["profileId"]
        self.description: str = data.get("description", "")
        self.max_depth: int = data["budget"].get("maxDepth", 2)
        self.jobs: int = data["budget"].get("jobs", 1)
        self.theta: int = data["suite"].get("theta", 3)
        self.lambda_offset: int = data["suite"].get("lambdaOffset", 2)
        self.axioms: Optional[list] = data["suite"].get("axioms")
        self.max_mem_mib: Optional[float] = data["limits"].get("maxMemMiB")
        self.output_format: str = data["output"].get("format", "text")

    def lambda_fn(self) -> Callable[[int], int]:
        """lambda(alpha) = alpha + lambdaOffset."""
        offset = self.lambda_offset
        return lambda alpha: alpha + offset

    def __repr__(self) -> str:
        return f"<Profile id={self.profile_id} depth={self.max_depth} jobs={self.jobs}>"


def fallback_profile() -> Profile:
    """The built-in profile used when no profile file can be found."""
    return Profile({
        "schemaVersion": "1.0",
        "profileId": "default",
        "description": "Built-in fallback profile.",
        "budget": {"maxDepth": 2, "jobs": 1},
        "suite": {"theta": 3, "lambdaOffset": 2, "axioms": None},
        "limits": {"maxMemMiB": None},
        "output": {"format": "text"},
    })


class ProfileLoader:
    """Loads profile JSON files from a directory."""

    def __init__(self, profiles_dir: str):
        self.profiles_dir = profiles_dir

    def load(self, profile_id: str) -> Profile:
        """Load a profile by its ID from the profiles directory."""
        path = os.path.join(self.profiles_dir, f"{profile_id}.json")
        if not os.path.exists(path):
            raise ProfileLoadError(f"Profile file not found: {path}")
        with open(path, "r", encoding="utf-8") as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as e:
                raise ProfileLoadError(f"Invalid JSON in profile file '{path}': {e}")
        self._validate(data, path)
        return Profile(data)

    def list_available(self) -> list:
        """Return the IDs of the profiles in the profiles directory."""
        if not os.path.isdir(self.profiles_dir):
            return []
        return sorted(f[:-5] for f in os.listdir(self.profiles_dir) if f.endswith(".json"))

    def _validate(self, data: dict, path: str) -> None:
        if not isinstance(data, dict):
            raise ProfileLoadError(f"Profile file '{path}' must contain an object")
        missing = REQUIRED_KEYS - set(data.keys())
        if missing:
            raise ProfileLoadError(
                f"Profile file '{path}' is missing required keys: {sorted(missing)}"
            )
        if data.get("schemaVersion") != "1.0":
            raise ProfileLoadError(
                f"Profile file '{path}' has unsupported schemaVersion: {data.get('schemaVersion')}"
            )
        for section in ("budget", "suite", "limits", "output"):
            if not isinstance(data[section], dict):
                raise ProfileLoadError(f"Profile file '{path}': '{section}' must be an object")
        for key in ("maxDepth", "jobs"):
            value = data["budget"].get(key, 1)
            if not isinstance(value, int) or value < 1:
                raise ProfileLoadError(f"Profile file '{path}': budget.{key} must be a positive integer")
        axioms = data["suite"].get("axioms")
        if axioms is not None and not (isinstance(axioms, list) and all(isinstance(a, str) for a in axioms)):
            raise ProfileLoadError(f"Profile file '{path}': suite.axioms must be a list of names")
        if data["output"].get("format", "text") not in ("text", "json"):
            raise ProfileLoadError(f"Profile file '{path}': output.format must be 'text' or 'json'")
