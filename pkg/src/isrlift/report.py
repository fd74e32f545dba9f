"""Structured run reports.

One report per CLI invocation.  The structured form is a single JSON
document; the text form renders the same content for terminals.  Given
identical inputs, flags, and seed, both forms are byte-identical except
for the timings block, which is excluded from determinism comparisons.
"""

from __future__ import annotations

import hashlib
import json
import os
import sys

from . import __version__

_GREEN = "\x1b[32m"
_RED = "\x1b[31m"
_YELLOW = "\x1b[33m"
_RESET = "\x1b[0m"


def color_enabled(stream=None) -> bool:
    env = os.environ.get("ISR_COLOR")
    if env == "0":
        return False
    if env == "1":
        return True
    stream = stream or sys.stdout
    return hasattr(stream, "isatty") and stream.isatty()


def fmt(x) -> str:
    """Deterministic scalar formatting for text reports."""
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, float):
        return f"{x:.12g}"
    if isinstance(x, complex):
        return f"{x.real:.12g}{x.imag:+.12g}i"
    return str(x)


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


class RunReport:
    """Accumulates sections, certificates, and residual tables for one run."""

    def __init__(self, command, params, mode, seed, tolerances):
        self.command = command
        self.params = dict(params)
        self.mode = mode
        self.seed = seed
        self.tolerances = dict(tolerances)
        self.inputs = []
        self.sections = []
        self.certificates = []
        self.residuals = {}
        self.spectra = {}
        self.q_matrix = None
        self.notes = []
        self.verdict = None
        self.timings = {}

    def add_input(self, label, path):
        self.inputs.append(
            {"label": label, "path": str(path), "sha256": sha256_file(path)}
        )

    def add_section(self, title, lines):
        self.sections.append((title, [str(line) for line in lines]))

    def add_certificate(self, label, cert):
        self.certificates.append(
            {
                "label": label,
                "kind": cert.kind,
                "verdict": bool(cert.verdict),
                "max_residual": float(cert.max_residual),
                "tolerance": float(cert.tolerance),
                "k_max": cert.k_max,
                "samples": list(cert.samples) if cert.samples is not None else None,
            }
        )

    def add_note(self, text):
        self.notes.append(str(text))

    def to_json(self) -> str:
        doc = {
            "tool": "isrlift",
            "version": __version__,
            "command": self.command,
            "params": self.params,
            "mode": self.mode,
            "seed": self.seed,
            "tolerances": self.tolerances,
            "inputs": self.inputs,
            "sections": [
                {"title": title, "lines": lines} for title, lines in self.sections
            ],
            "certificates": self.certificates,
            "residuals": {k: fmt(v) for k, v in self.residuals.items()},
            "spectra": {k: [fmt(v) for v in vals] for k, vals in self.spectra.items()},
            "q_matrix": self.q_matrix,
            "notes": self.notes,
            "verdict": self.verdict,
            "timings": self.timings,
        }
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"

    def render_text(self, color=None) -> str:
        if color is None:
            color = color_enabled()

        def paint(s, code):
            return f"{code}{s}{_RESET}" if color else s

        out = []
        out.append(f"isrlift {__version__} :: {self.command}")
        for inp in self.inputs:
            out.append(f"  input {inp['label']}: {inp['path']} sha256={inp['sha256'][:16]}...")
        out.append(
            f"  mode={self.mode} seed={self.seed} "
            + " ".join(f"{k}={fmt(v)}" for k, v in self.tolerances.items())
        )
        for title, lines in self.sections:
            out.append("")
            out.append(f"[{title}]")
            out.extend(f"  {line}" for line in lines)
        if self.certificates:
            out.append("")
            out.append("[certificates]")
            for cert in self.certificates:
                word = (
                    paint("CERTIFIED", _GREEN)
                    if cert["verdict"]
                    else paint("REJECTED", _RED)
                )
                extra = ""
                if cert["k_max"] is not None:
                    extra += f" k_max={cert['k_max']}"
                if cert["samples"]:
                    extra += f" samples={len(cert['samples'])}"
                out.append(
                    f"  {cert['label']} [{cert['kind']}]: {word} "
                    f"max_residual={fmt(cert['max_residual'])} "
                    f"tolerance={fmt(cert['tolerance'])}{extra}"
                )
        if self.residuals:
            out.append("")
            out.append("[residuals]")
            for k, v in self.residuals.items():
                out.append(f"  {k} = {fmt(v)}")
        for name, vals in self.spectra.items():
            out.append("")
            out.append(f"[{name}]")
            out.append("  " + ", ".join(fmt(v) for v in vals))
        if self.q_matrix:
            out.append("")
            out.append("[extension matrix]")
            out.extend(f"  {line}" for line in self.q_matrix.rstrip("\n").split("\n"))
        for note in self.notes:
            out.append("")
            out.append(paint(f"note: {note}", _YELLOW))
        if self.verdict is not None:
            out.append("")
            word = paint("PASS", _GREEN) if self.verdict else paint("FAIL", _RED)
            out.append(f"verdict: {word}")
        if self.timings:
            out.append("")
            out.append(
                "timings: " + " ".join(f"{k}={v:.6f}s" for k, v in self.timings.items())
            )
        return "\n".join(out) + "\n"
