"""Bundled example networks (chest-clinic and patient-monitoring fixtures)."""
from importlib import resources

from ..network import BeliefNetwork, parse_network


def load(name: str) -> BeliefNetwork:
    """Load a bundled network by name, e.g. ``load("asia")``."""
    return parse_network(read_text(name))


def read_text(name: str) -> str:
    return resources.files(__package__).joinpath(f"{name}.json").read_text("utf-8")
