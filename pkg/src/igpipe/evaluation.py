"""Token-level scoring of predicted against gold annotations.

Both sides are collapsed (property tags folded into their component,
both object kinds into Object) before counting. Untagged/Untagged
agreements never enter any figure; a component with gold support but no
predictions gets precision 0 with a note instead of NaN.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

from .classifier import StatementType
from .errors import AlignmentError
from .tagger import AnnotationRecord, collapse_tags_for_eval

REGULATIVE_COMPONENTS = ("Attribute", "Object", "Deontic", "Aim", "Context")
CONSTITUTIVE_COMPONENTS = (
    "ConstitutedEntity",
    "ConstitutingProperties",
    "ConstitutiveFunction",
    "Modal",
    "Context",
)
_LAYER_COMPONENTS = {
    StatementType.REGULATIVE: REGULATIVE_COMPONENTS,
    StatementType.CONSTITUTIVE: CONSTITUTIVE_COMPONENTS,
}


@dataclass(frozen=True)
class GoldCorpus:
    records: tuple[AnnotationRecord, ...]
    provenance: str = ""


@dataclass(frozen=True)
class ComponentMetrics:
    layer: str
    component: str
    precision: float
    recall: float
    f1: float
    support: int
    no_predictions: bool = False


@dataclass(frozen=True)
class LayerOverall:
    layer: str
    macro_precision: float
    macro_recall: float
    macro_f1: float
    micro_precision: float
    micro_recall: float
    micro_f1: float


@dataclass(frozen=True)
class EvalReport:
    rows: tuple[ComponentMetrics, ...]
    overall: tuple[LayerOverall, ...]

    def row(self, layer: str, component: str) -> ComponentMetrics:
        for r in self.rows:
            if r.layer == layer and r.component == component:
                return r
        raise KeyError((layer, component))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["layer", "component", "f1", "precision", "recall", "support", "note"])
        for r in self.rows:
            w.writerow(
                [
                    r.layer,
                    r.component,
                    f"{r.f1:.2f}",
                    f"{r.precision:.2f}",
                    f"{r.recall:.2f}",
                    r.support,
                    "no_predictions" if r.no_predictions else "",
                ]
            )
        for o in self.overall:
            w.writerow(
                [o.layer, "Overall (macro)", f"{o.macro_f1:.2f}",
                 f"{o.macro_precision:.2f}", f"{o.macro_recall:.2f}", "", ""]
            )
            w.writerow(
                [o.layer, "Overall (micro)", f"{o.micro_f1:.2f}",
                 f"{o.micro_precision:.2f}", f"{o.micro_recall:.2f}", "", ""]
            )
        return buf.getvalue()


def _f1(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r else 0.0


def _align(
    pred: Sequence[AnnotationRecord], gold: Sequence[AnnotationRecord]
) -> list[tuple[AnnotationRecord, AnnotationRecord]]:
    gold_by_ref = {g.statement_ref: g for g in gold}
    pairs = []
    for p in pred:
        g = gold_by_ref.get(p.statement_ref)
        if g is None:
            raise AlignmentError(
                f"statement {p.doc_id}/{p.statement_id} has no gold counterpart"
            )
        if len(g.tokens) != len(p.tokens):
            raise AlignmentError(
                f"statement {p.doc_id}/{p.statement_id}: {len(p.tokens)} predicted "
                f"tokens vs {len(g.tokens)} gold tokens"
            )
        pairs.append((p, g))
    pred_refs = {p.statement_ref for p in pred}
    for g in gold:
        if g.statement_ref not in pred_refs:
            raise AlignmentError(
                f"statement {g.doc_id}/{g.statement_id} has no prediction"
            )
    return pairs


def evaluate_tagger(
    pred: Sequence[AnnotationRecord], gold: GoldCorpus | Sequence[AnnotationRecord]
) -> EvalReport:
    """Per-component precision/recall/F1 table plus per-layer overalls.

    The gold statement type decides which layer a statement is scored
    under. Raises AlignmentError naming the first statement whose gold
    counterpart is missing or token-misaligned.
    """
    gold_records = gold.records if isinstance(gold, GoldCorpus) else tuple(gold)
    pairs = _align(pred, gold_records)

    # (layer, component) -> [tp, n_pred, n_gold]
    counts: dict[tuple[str, str], list[int]] = {}
    layers_seen: list[StatementType] = []
    for p, g in pairs:
        layer_type = g.type
        if layer_type not in layers_seen:
            layers_seen.append(layer_type)
        components = _LAYER_COMPONENTS[layer_type]
        p_labels = collapse_tags_for_eval(p.tags)
        g_labels = collapse_tags_for_eval(g.tags)
        for pl, gl in zip(p_labels, g_labels):
            for comp in components:
                key = (layer_type.value, comp)
                c = counts.setdefault(key, [0, 0, 0])
                if pl == comp and gl == comp:
                    c[0] += 1
                if pl == comp:
                    c[1] += 1
                if gl == comp:
                    c[2] += 1

    rows: list[ComponentMetrics] = []
    overalls: list[LayerOverall] = []
    for layer_type in (StatementType.REGULATIVE, StatementType.CONSTITUTIVE):
        if layer_type not in layers_seen:
            continue
        layer = layer_type.value
        comp_rows = []
        for comp in _LAYER_COMPONENTS[layer_type]:
            tp, n_pred, n_gold = counts.get((layer, comp), [0, 0, 0])
            precision = tp / n_pred if n_pred else 0.0
            recall = tp / n_gold if n_gold else 0.0
            comp_rows.append(
                ComponentMetrics(
                    layer=layer,
                    component=comp,
                    precision=precision,
                    recall=recall,
                    f1=_f1(precision, recall),
                    support=n_gold,
                    no_predictions=(n_pred == 0 and n_gold > 0),
                )
            )
        rows.extend(comp_rows)
        present = [r for r in comp_rows if r.support > 0]
        if present:
            macro_p = sum(r.precision for r in present) / len(present)
            macro_r = sum(r.recall for r in present) / len(present)
            macro_f = sum(r.f1 for r in present) / len(present)
        else:
            macro_p = macro_r = macro_f = 0.0
        tp_all = sum(counts.get((layer, c), [0, 0, 0])[0] for c in _LAYER_COMPONENTS[layer_type])
        pred_all = sum(counts.get((layer, c), [0, 0, 0])[1] for c in _LAYER_COMPONENTS[layer_type])
        gold_all = sum(counts.get((layer, c), [0, 0, 0])[2] for c in _LAYER_COMPONENTS[layer_type])
        micro_p = tp_all / pred_all if pred_all else 0.0
        micro_r = tp_all / gold_all if gold_all else 0.0
        overalls.append(
            LayerOverall(
                layer=layer,
                macro_precision=macro_p,
                macro_recall=macro_r,
                macro_f1=macro_f,
                micro_precision=micro_p,
                micro_recall=micro_r,
                micro_f1=_f1(micro_p, micro_r),
            )
        )
    return EvalReport(rows=tuple(rows), overall=tuple(overalls))
