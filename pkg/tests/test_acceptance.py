"""End-to-end acceptance battery.

One test per check group, so the -v listing reads as one pass/fail line
per headline result.  The groups themselves live in
hypint.verification and are shared with the command-line verify
subcommand; this file only asserts that every row meets its stated
tolerance.
"""

import pytest

from hypint.verification import GROUPS, SUITES, group_rows, run_suite

_IDS = ["%02d-%s" % (gid, title.replace(" ", "-")) for gid, title, _ in GROUPS]


@pytest.mark.parametrize(
    "gid,title", [(gid, title) for gid, title, _ in GROUPS], ids=_IDS
)
def test_group(gid, title):
    rows = group_rows(gid)
    assert rows, "group %d produced no rows" % gid
    for row in rows:
        print(row.line())
    bad = [row.line() for row in rows if not row.passed]
    assert not bad, "%s:\n%s" % (title, "\n".join(bad))


def test_suites_cover_all_groups():
    assert set(SUITES["all"]) == {gid for gid, _, _ in GROUPS}
    assert set(SUITES["paper"]) | set(SUITES["identities"]) == set(SUITES["all"])


def test_suite_is_deterministic():
    first = [r.line() for r in run_suite("identities")]
    second = [r.line() for r in run_suite("identities")]
    assert first == second
