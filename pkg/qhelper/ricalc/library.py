"""
Built-in resource inequalities and derivation certificates.
"""
from typing import Any, Dict

from qhelper.ricalc.ast import RIStatement
from qhelper.ricalc.parser import parse

TELEPORTATION = "2 [c->c] + [qq] >= [q->q]"
SUPERDENSE_CODING = "[q->q] + [qq] >= 2 [c->c]"
ENTANGLEMENT_DISTRIBUTION = "[q->q] >= [qq]"
SCHUMACHER = "H(B)_rho [q->q] >= <rho_B>"
EA_CAPACITY = "<N> + inf [qq] >= Q(N) [q->q]"
STATE_MERGING = "<psi_{A|B|R}> + I(A;R)_psi [c->c] + H(A|B)_psi [qq] >= <psi_{|AB|R}>"
FQSW = "<psi_{A|B|R}> + 1/2 I(A;R)_psi [q->q] >= 1/2 I(A;B)_psi [qq] + <psi_{|AB|R}>"
QRST = "1/2 I(R;B)_psi [q->q] + 1/2 I(E;B)_psi [qq] >= <N:rho_A>"
HELPER_QRST = "1/2 I(RA;C)_phi [q->q] + 1/2 I(E;C)_phi [qq] >= <E:rho_B>"

LIBRARY: Dict[str, str] = {
    "teleportation": TELEPORTATION,
    "superdense_coding": SUPERDENSE_CODING,
    "entanglement_distribution": ENTANGLEMENT_DISTRIBUTION,
    "schumacher": SCHUMACHER,
    "ea_capacity": EA_CAPACITY,
    "state_merging": STATE_MERGING,
    "fqsw": FQSW,
    "qrst": QRST,
    "helper_qrst": HELPER_QRST,
}

# certificate payloads in the certificate-file schema
CERTIFICATES: Dict[str, Dict[str, Any]] = {
    "merge_from_fqsw": {
        "name": "merge_from_fqsw",
        "target": "state_merging",
        "steps": [
            {"ri": "teleportation", "scale": "1/2 I(A;R)_psi"},
            {"ri": "fqsw"},
        ],
        "bindings": {},
        "samples": {"kind": "random_pure", "labels": ["A", "B", "R"], "dims": [2, 2, 2], "count": 50, "seed": 0},
    },
    "teleport_superdense": {
        "name": "teleport_superdense",
        "target": "[qq] + [qq] >= 0",
        "steps": [{"ri": "teleportation"}, {"ri": "superdense_coding"}],
        "bindings": {},
        "samples": {"kind": "random_pure", "labels": ["A", "B", "R"], "dims": [2, 2, 2], "count": 1, "seed": 0},
    },
}


def resolve(name_or_text: str) -> RIStatement:
    """A library name or literal RI text."""
    return parse(LIBRARY.get(name_or_text.strip(), name_or_text))
