"""Regenerate docs/traceability.md from the claim registry."""
from pathlib import Path

from h0quartic.verify import registry

GROUP_TITLES = {
    "tail": "Gaussian tail constants",
    "case1": "Divisors off the torus",
    "lattice": "Short-vector premises",
    "case2": "Large unit: outer windows",
    "case2c": "Large unit: second derivative",
    "case3": "Small unit",
    "table1": "Per-field table cells",
    "field": "Per-field window checks",
    "theorem": "Per-field maximum at the trivial class",
}


def main():
    claims = registry()
    lines = ["# Claim ledger", "",
             "Every id below is registered in `h0quartic.verify` and checked by "
             "`tests/test_verify.py::test_ledger_matches_traceability`.", ""]
    for group, title in GROUP_TITLES.items():
        ids = sorted(i for i, c in claims.items() if c.group == group)
        if not ids:
            continue
        lines += [f"## {title}", "", "| id | assertion | note |", "|---|---|---|"]
        for i in ids:
            c = claims[i]
            window = f" on s in [{c.s_interval[0]:.6g}, {c.s_interval[1]:.6g}]" if c.s_interval else ""
            note = c.summary + (" (informational)" if c.informational else "")
            lines.append(f"| `{i}` | value {c.direction} {c.claimed:.6g}{window} | {note} |")
        lines.append("")
    missing = set(claims) - {i for i, c in claims.items() if c.group in GROUP_TITLES}
    if missing:
        raise SystemExit(f"ungrouped claims: {sorted(missing)}")
    out = Path(__file__).resolve().parents[1] / "docs" / "traceability.md"
    out.parent.mkdir(exist_ok=True)
    out.write_text("\n".join(lines))
    print(f"{len(claims)} claims -> {out}")


if __name__ == "__main__":
    main()
