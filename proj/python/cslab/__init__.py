"""Coherent-state path integrals and classical limits."""

import json

from ._cslab import Error, ValidationError, __version__, coherent_state, commands, overlap
from . import _cslab

__all__ = ["Error", "ValidationError", "Result", "coherent_state", "commands", "defaults", "overlap", "run"]


class Result:
    """Records of one run; ``table`` is (header, rows) for series commands."""

    def __init__(self, records, table, audit_failed):
        self.records = records
        self.table = table
        self.audit_failed = audit_failed

    def kind(self, name):
        return [r for r in self.records if r["kind"] == name]

    def columns(self):
        if self.table is None:
            return {}
        header, rows = self.table
        return {h: [row[k] for row in rows] for k, h in enumerate(header)}


def defaults(command):
    return json.loads(_cslab.defaults(command))


def run(command, **params):
    """Run a subcommand; keyword names match the CLI flags with underscores."""
    text = {k: ",".join(map(str, v)) if isinstance(v, (list, tuple)) else str(v) for k, v in params.items()}
    records, table, failed = _cslab.run(command, text)
    return Result([json.loads(r) for r in records], table, failed)
