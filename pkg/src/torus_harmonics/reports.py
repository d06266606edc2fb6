"""Table builders and deterministic CSV / JSON / Markdown writers.

Every table is a list of flat dicts with a fixed column order.  Floats are
rounded to 12 significant digits so that repeated runs are byte-identical.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .character_table import CharacterTable, IrrepLabel
from .errors import ConfigError, NotAConstituent
from .gl2_geometry import GL2
from .twisted_harmonics import decompose, spherical_explicit, spherical_via_averaging, table1_predicted
from .uncertainty import extremal_scan, random_hecke_batch, uncertainty_batch

DIGITS = 12
SNAP = 1e-12


def num(x: float) -> float:
    """Round to DIGITS significant digits, snapping |x| < SNAP to 0; never returns -0.0."""
    x = float(x)
    if abs(x) < SNAP:
        return 0.0
    return float(f"{x:.{DIGITS}g}") + 0.0


def cnum(z: complex) -> str:
    z = complex(z)
    re, im = num(z.real), num(z.imag)
    if im == 0:
        return f"{re:g}"
    if re == 0:
        return f"{im:g}j"
    return f"{re:g}{im:+g}j"


def params_str(label: IrrepLabel) -> str:
    return ";".join(str(p) for p in label.params)


# ---- writers --------------------------------------------------------------------------

def to_csv(rows: list[dict], columns: list[str] | None = None) -> str:
    columns = columns or (list(rows[0]) if rows else [])
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def to_json(rows: list[dict]) -> str:
    return json.dumps(rows, indent=2, ensure_ascii=False) + "\n"


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "csv":
        return to_csv(rows)
    if fmt == "json":
        return to_json(rows)
    raise ConfigError(f"unknown format {fmt!r}")


def write_text(path, text: str) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


# ---- tables ---------------------------------------------------------------------------

def field_info_rows(table: CharacterTable) -> list[dict]:
    ctx, group = table.ctx, table.group
    items = [
        ("q", ctx.q), ("delta", ctx.delta),
        ("gE", f"{ctx.gE.a}+{ctx.gE.b}*sqrt({ctx.delta})"), ("gF", ctx.gF),
        ("order_E_units", ctx.order_e), ("order_F_units", ctx.order_f),
        ("order_G", group.order), ("order_K", len(group.torus)),
        ("classes", len(group.classes)), ("irreducibles", len(table.labels)),
        ("double_cosets", len(group.double_cosets)),
    ]
    return [{"key": k, "value": v} for k, v in items]


def chartable_rows(table: CharacterTable) -> list[dict]:
    cols = [str(c) for c in table.classes]
    rows = []
    for lab, vals in zip(table.labels, table.values):
        row = {"family": lab.family, "params": params_str(lab), "dim": lab.dim}
        row.update({c: cnum(v) for c, v in zip(cols, vals)})
        rows.append(row)
    return rows


def doublecoset_rows(group: GL2) -> list[dict]:
    dc = group.double_cosets
    rows = []
    for cid in range(len(dc)):
        a, b, c, d = group.element(int(dc.representatives[cid]))
        rows.append({"coset_id": cid, "size": int(dc.sizes[cid]),
                     "rep_a": a, "rep_b": b, "rep_c": c, "rep_d": d,
                     "diagonal_as": ";".join(str(x) for x in dc.diagonal_as[cid])})
    return rows


def decomposition_rows(table: CharacterTable, j: int) -> list[dict]:
    ctx = table.ctx
    phi = ctx.phi(j)
    rows = []
    for lab, m in decompose(table, phi).entries:
        pred = table1_predicted(ctx, lab, phi)
        rows.append({"family": lab.family, "params": params_str(lab), "dim": lab.dim,
                     "mult_oracle": int(m), "mult_table1": int(pred),
                     "match": "yes" if m == pred else "no"})
    return rows


def spherical_rows(table: CharacterTable, j: int, lam: int) -> list[dict]:
    """Per double coset: averaging value at the representative and the closed form where defined."""
    ctx, group, q = table.ctx, table.group, table.q
    phi = ctx.phi(j)
    if ctx.is_frobenius_fixed(ctx.phi(lam)):
        raise ConfigError(f"Lambda_{lam} is Frobenius-fixed; no cuspidal representation")
    label = table.cuspidal(lam)
    try:
        sph = spherical_via_averaging(table, phi, label)
    except NotAConstituent as exc:
        raise ConfigError(str(exc)) from None
    dc = group.double_cosets
    rows = []
    for cid in range(len(dc)):
        avg = complex(sph.values[cid])
        a_list = dc.diagonal_as[cid]
        row = {"coset_id": cid, "diagonal_as": ";".join(str(x) for x in a_list),
               "value_averaging_re": num(avg.real), "value_averaging_im": num(avg.imag)}
        if a_list and (a_list[0] + 1) % q != 0:
            exp = spherical_explicit(ctx, phi, ctx.phi(lam), a_list[0])
            row.update(value_explicit_re=num(exp.real), value_explicit_im=num(exp.imag),
                       residual=num(abs(avg - exp)))
        else:
            row.update(value_explicit_re="n/a", value_explicit_im="n/a", residual="n/a")
        rows.append(row)
    return rows


def _uncertainty_row(trial_id, rec) -> dict:
    return {"trial_id": trial_id, "support_size": rec.support_size,
            "degree_sum": rec.fourier_degree_sum, "product": rec.product,
            "margin": rec.margin, "extremal": "yes" if rec.extremal else "no"}


def uncertainty_rows(table: CharacterTable, j: int, samples: int, seed: int,
                     exhaustive: bool = False) -> list[dict]:
    phi = table.ctx.phi(j)
    rows = []
    if samples:
        F = random_hecke_batch(table.group, phi, samples, np.random.default_rng(seed))
        rows += [_uncertainty_row(n, r) for n, r in enumerate(uncertainty_batch(table, phi, F))]
    if exhaustive:
        scan = extremal_scan(table, phi)
        rows += [_uncertainty_row(name, r) for name, r in scan["basis"] + scan["spherical"]]
    return rows


# ---- findings -----------------------------------------------------------------------

STATUSES = ("verified", "refuted", "partial")


@dataclass(frozen=True)
class FindingsEntry:
    claim_id: str
    location: str
    status: str
    evidence: str

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")
        if self.status == "partial" and not self.evidence:
            raise ValueError("a partial finding needs numeric evidence")


def render_findings(entries: list[FindingsEntry], qs) -> str:
    seen = set()
    for e in entries:
        if e.claim_id in seen:
            raise ValueError(f"duplicate claim id {e.claim_id}")
        seen.add(e.claim_id)
    lines = ["# Findings", "",
             f"Fields checked: q in {{{', '.join(str(q) for q in qs)}}}.", "",
             "| claim | location | status |", "|---|---|---|"]
    lines += [f"| `{e.claim_id}` | {e.location} | {e.status} |" for e in entries]
    lines.append("")
    for e in entries:
        lines += [f"## {e.claim_id}", "", f"- location: {e.location}", f"- status: {e.status}", "",
                  e.evidence.rstrip(), ""]
    return "\n".join(lines)
