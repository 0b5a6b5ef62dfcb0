"""Per-key resolution results and their CSV export."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError

RESULT_HEADER = ["user", "key", "value", "certain"]
NO_SOLUTION_MARK = "# no_stable_solution"


@dataclass(frozen=True)
class ResolutionResult:
    """Possible and certain values of every user for one key.

    Users without any possible value are left out of ``possible`` entirely, so
    two results compare equal exactly when they agree user by user.
    """

    key: str
    possible: dict = field(default_factory=dict)
    certain: dict = field(default_factory=dict)
    no_stable_solution: bool = False

    def __post_init__(self):
        cleaned = {u: frozenset(vs) for u, vs in self.possible.items() if vs}
        object.__setattr__(self, "possible", dict(sorted(cleaned.items())))
        object.__setattr__(self, "certain", dict(sorted(self.certain.items())))

    __hash__ = None

    def possible_of(self, user) -> frozenset:
        return self.possible.get(user, frozenset())

    def rows(self) -> list[tuple[str, str, str, bool]]:
        out = []
        for user, values in self.possible.items():
            for v in sorted(values):
                out.append((user, self.key, v, self.certain.get(user) == v))
        return out

    def restrict(self, users) -> "ResolutionResult":
        users = set(users)
        return ResolutionResult(
            self.key,
            {u: vs for u, vs in self.possible.items() if u in users},
            {u: v for u, v in self.certain.items() if u in users},
            self.no_stable_solution,
        )


def certain_from_possible(possible: dict) -> dict:
    # Valid only when every user with a nonempty set holds some value in every
    # stable solution; the resolution engine establishes that before calling.
    return {u: next(iter(vs)) for u, vs in possible.items() if len(vs) == 1}


def results_to_csv(results) -> str:
    buf = io.StringIO()
    results = list(results)
    if any(r.no_stable_solution for r in results):
        buf.write(NO_SOLUTION_MARK + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RESULT_HEADER)
    for r in results:
        for user, key, value, is_certain in r.rows():
            writer.writerow([user, key, value, "true" if is_certain else "false"])
    return buf.getvalue()


def result_to_csv(result: ResolutionResult) -> str:
    return results_to_csv([result])


def results_from_csv(text: str) -> list[ResolutionResult]:
    lines = text.splitlines()
    flagged = bool(lines) and lines[0] == NO_SOLUTION_MARK
    if flagged:
        lines = lines[1:]
    reader = csv.reader(lines)
    header = next(reader, None)
    if header != RESULT_HEADER:
        raise ParseError(f"expected header {','.join(RESULT_HEADER)}, got {header}")
    possible: dict[str, dict[str, set]] = {}
    certain: dict[str, dict[str, str]] = {}
    for lineno, row in enumerate(reader, start=2):
        if len(row) != 4 or not all(row[:3]) or row[3] not in ("true", "false"):
            raise ParseError(f"line {lineno}: malformed result row {row!r}")
        user, key, value, flag = row
        possible.setdefault(key, {}).setdefault(user, set()).add(value)
        if flag == "true":
            certain.setdefault(key, {})[user] = value
    return [
        ResolutionResult(k, possible[k], certain.get(k, {}), flagged) for k in sorted(possible)
    ]


def write_results(results, path) -> None:
    Path(path).write_text(results_to_csv(results), encoding="utf-8")
