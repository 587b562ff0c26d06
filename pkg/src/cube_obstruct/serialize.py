"""Canonical JSON for obstruction certificates (schema_version 1)."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .obstruction import Hypothesis, ObstructionCertificate

SCHEMA_VERSION = 1


def certificate_to_dict(cert: ObstructionCertificate) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "theorem": cert.theorem,
        "mode": cert.mode,
        "n": cert.n,
        "curve": dict(cert.curve),
        "p": cert.p,
        "sigma": list(cert.sigma),
        "hypotheses": [
            {"name": h.name, "status": h.status, "witness": dict(h.witness)} for h in cert.hypotheses
        ],
        "heuristic_inputs": dict(cert.heuristic_inputs),
    }
    if cert.q is not None:
        doc["q"] = cert.q
    if cert.conclusion is not None:
        doc["conclusion"] = cert.conclusion
    if cert.notes:
        doc["notes"] = list(cert.notes)
    return doc


def certificate_from_dict(doc: dict) -> ObstructionCertificate:
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {doc.get('schema_version')!r}")
    return ObstructionCertificate(
        theorem=doc["theorem"],
        mode=doc["mode"],
        n=doc["n"],
        curve=doc["curve"],
        p=doc["p"],
        hypotheses=[Hypothesis(h["name"], h["status"], h["witness"]) for h in doc["hypotheses"]],
        heuristic_inputs=doc["heuristic_inputs"],
        sigma=doc.get("sigma", []),
        q=doc.get("q"),
        conclusion=doc.get("conclusion"),
        notes=doc.get("notes", []),
    )


def dumps(doc: dict) -> str:
    """Sorted keys and fixed indentation: identical input gives identical bytes."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def emit_certificate(cert: ObstructionCertificate, destination=None) -> str:
    text = dumps(certificate_to_dict(cert))
    if destination is not None:
        atomic_write(Path(destination), text)
    return text


def atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
