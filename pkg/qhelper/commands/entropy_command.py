"""
`entropy`: entropic quantities of a state.
"""
import argparse
from itertools import combinations, permutations
from typing import Dict, List

from qhelper.commands.base_command import BaseCommand, CommandResult
from qhelper.core.qcore import State, cond_entropy, entropy, mutual_info
from qhelper.ricalc.calculus import evaluate_expr
from qhelper.ricalc.parser import expr_to_text, parse_expr
from qhelper.utils.input_validation import InputValidator


def default_table(state: State) -> List[Dict]:
    """H of every label, H(X|Y) for ordered pairs, I(X;Y) for unordered pairs."""
    labels = state.labels
    rows = [{"expression": f"H({l})", "value": entropy(state, l)} for l in labels]
    rows += [{"expression": f"H({x}|{y})", "value": cond_entropy(state, x, y)}
             for x, y in permutations(labels, 2)]
    rows += [{"expression": f"I({x};{y})", "value": mutual_info(state, x, y)}
             for x, y in combinations(labels, 2)]
    return rows


class EntropyCommand(BaseCommand):
    def __init__(self, settings=None):
        super().__init__("entropy", settings)

    def run(self, args: argparse.Namespace) -> CommandResult:
        state = InputValidator.validate_state(args.state)
        bindings = InputValidator.validate_bindings(getattr(args, "map", None))
        expressions = getattr(args, "expressions", None) or []
        if expressions:
            rows = []
            for text in expressions:
                node = parse_expr(text)
                rows.append({"expression": expr_to_text(node), "value": evaluate_expr(node, state, bindings)})
        else:
            rows = default_table(state)
        self.log_activity(f"evaluated {len(rows)} quantities on {list(state.labels)}", "DEBUG")
        data = {
            **self.echo(args, state=args.state),
            "labels": list(state.labels),
            "dims": list(state.layout.dims),
            "entries": rows,
        }
        return self.create_result(data)
