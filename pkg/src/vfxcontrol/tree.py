"""Three-level synchronized control hierarchy.

Concept nodes sit above attribute nodes, which sit above technical leaves.
All synchronization math runs on normalized values in [0, 1]; node ranges
(including inverted current-to-goal ranges) are only an affine mapping for
display and for writing technical leaves back to the engine.

Upward propagation is a weighted mean of children; downward propagation
scales children by target/current, clamps to [0, 1], and redistributes any
clamped-away difference among children that can still move (at most 5
rounds, stopping once the weighted sum is within 0.001 of the target).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .errors import LockedNodeError, TreeError, UnknownNodeError

MAX_REDISTRIBUTION_ITERATIONS = 5
REDISTRIBUTION_TOLERANCE = 0.001
DEGENERATE_CURRENT = 1e-6

LEVELS = ("concept", "attribute", "technical")


def clamp01(x: float) -> float:
    if x < 0.0:
        return 0.0
    if x > 1.0:
        return 1.0
    return x


@dataclass(frozen=True)
class ControlRange:
    """Display range for a node. `min` anchors at the current value for
    technical nodes; min > max is a legal inverted range."""

    min: float
    max: float

    def __post_init__(self):
        if self.min == self.max:
            raise TreeError(f"degenerate control range {self.min}..{self.max}")

    def normalize(self, raw: float) -> float:
        return clamp01((raw - self.min) / (self.max - self.min))

    def denormalize(self, value: float) -> float:
        return self.min + value * (self.max - self.min)


@dataclass
class ControlNode:
    id: str
    name: str
    level: str
    description: str = ""
    range: ControlRange = field(default_factory=lambda: ControlRange(0.0, 100.0))
    value: float = 0.0  # normalized, always in [0, 1]
    children: list[str] = field(default_factory=list)
    child_weights: dict[str, float] = field(default_factory=dict)
    step_labels: list[str] = field(default_factory=list)
    dropdown_presets: dict[str, dict[str, float]] = field(default_factory=dict)
    locked: bool = False
    interacting: bool = False

    @property
    def raw_value(self) -> float:
        return self.range.denormalize(self.value)


@dataclass
class NodeChange:
    node_id: str
    old: float
    new: float
    old_raw: float
    new_raw: float


@dataclass
class SyncEvent:
    """Audit record of one propagation pass."""

    origin: str
    changes: list[NodeChange] = field(default_factory=list)
    iterations: int = 0
    residual: float = 0.0
    technical_writes: list[tuple[str, float]] = field(default_factory=list)

    def changed_ids(self) -> list[str]:
        return [c.node_id for c in self.changes]


def normalize_weights(
    weights: Mapping[str, float] | None, child_ids: Sequence[str]
) -> dict[str, float]:
    """Scale weights to sum to 1.0; absent, empty, or all-zero weights fall
    back to equal 1/n distribution."""
    n = len(child_ids)
    if n == 0:
        return {}
    cleaned = {cid: max(0.0, float((weights or {}).get(cid, 0.0))) for cid in child_ids}
    total = sum(cleaned.values())
    if total <= 0.0:
        return {cid: 1.0 / n for cid in child_ids}
    return {cid: w / total for cid, w in cleaned.items()}


@dataclass
class PanelConfig:
    """A complete generated panel: the tree plus engine bindings."""

    panel_name: str
    roots: list[str]
    nodes: dict[str, ControlNode]
    bindings: dict[str, str]  # technical node id -> catalog parameter name
    version: str = "1"


class ControlTree:
    """Mutable tree over a PanelConfig with the synchronization operations.

    `write_through`, when set, is called as (catalog_name, raw_value) for
    every technical-leaf change so the engine mirrors the panel.
    """

    def __init__(
        self,
        panel: PanelConfig,
        write_through: Callable[[str, float], None] | None = None,
    ):
        self.panel = panel
        self.nodes = panel.nodes
        self.write_through = write_through
        self._parents: dict[str, str] = {}
        for node in self.nodes.values():
            for child_id in node.children:
                if child_id not in self.nodes:
                    raise TreeError(f"node {node.id!r} references missing child {child_id!r}")
                self._parents[child_id] = node.id
            node.child_weights = normalize_weights(node.child_weights, node.children)

    # -- lookup ------------------------------------------------------------

    def node(self, node_id: str) -> ControlNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownNodeError(f"unknown node {node_id!r}") from None

    def parent_of(self, node_id: str) -> str | None:
        return self._parents.get(node_id)

    def weighted_sum(self, node_id: str) -> float:
        node = self.node(node_id)
        total_w = sum(node.child_weights.get(c, 0.0) for c in node.children)
        if total_w <= 0.0:
            return self.node(node_id).value
        acc = sum(
            node.child_weights.get(c, 0.0) * self.nodes[c].value for c in node.children
        )
        return acc / total_w

    # -- upward ------------------------------------------------------------

    def aggregate_up(self, parent_id: str, event: SyncEvent | None = None) -> float:
        """Recompute `parent_id` as the weighted mean of its children, then
        recompute its ancestors. Interacting nodes are never overwritten."""
        node = self.node(parent_id)
        if not node.children:
            raise TreeError(f"node {parent_id!r} has no children to aggregate")
        current: str | None = parent_id
        while current is not None:
            n = self.nodes[current]
            # Locked and interacting nodes are read (their value feeds the
            # next level) but never rewritten.
            if n.children and not n.interacting and not n.locked:
                new_value = clamp01(self.weighted_sum(current))
                if new_value != n.value:
                    self._record_change(n, new_value, event)
            current = self._parents.get(current)
        return self.nodes[parent_id].value

    # -- downward ----------------------------------------------------------

    def distribute_down(self, parent_id: str, target: float) -> SyncEvent:
        """Set `parent_id` to `target` (normalized) and cascade proportionally
        to descendants. Residual and iteration count describe the top level."""
        if not 0.0 <= target <= 1.0:
            raise TreeError(f"target must be normalized to [0,1], got {target}")
        event = SyncEvent(origin=parent_id)
        self._propagate_down(parent_id, target, event, top=True)
        return event

    def _propagate_down(
        self, node_id: str, target: float, event: SyncEvent, top: bool = False
    ) -> None:
        node = self.node(node_id)
        current = node.value
        self._record_change(node, target, event)
        if not node.children:
            return
        finals, iterations, residual = self._solve_children(node, current, target)
        if top:
            event.iterations = iterations
            event.residual = residual
        for child_id, new_value in finals:
            if new_value != self.nodes[child_id].value:
                self._propagate_down(child_id, new_value, event)

    def _solve_children(
        self, node: ControlNode, current: float, target: float
    ) -> tuple[list[tuple[str, float]], int, float]:
        """Scale-and-clamp pass followed by bounded redistribution.

        Redistribution only engages when the scaling pass was constrained
        (a child clamped, or a locked/interacting child sat out, or the
        current value was too small to scale); a parent that merely disagreed
        with its children beforehand does not trigger it. Returns the
        per-child final values (free children only; pinned children keep
        their current value), the redistribution iterations used, and the
        terminal |weighted sum - target| residual.
        """
        weights = node.child_weights
        values = {cid: self.nodes[cid].value for cid in node.children}
        free = [
            cid
            for cid in node.children
            if not self.nodes[cid].locked and not self.nodes[cid].interacting
        ]
        constrained = len(free) < len(node.children)

        if current < DEGENERATE_CURRENT:
            # target/current is undefined; park every free child on the target
            # directly, which satisfies the weighted sum when nothing is pinned.
            constrained = True
            for cid in free:
                values[cid] = clamp01(target)
        else:
            scale = target / current
            for cid in free:
                scaled = values[cid] * scale
                clamped = clamp01(scaled)
                if clamped != scaled:
                    constrained = True
                values[cid] = clamped

        def total() -> float:
            return sum(weights.get(cid, 0.0) * values[cid] for cid in node.children)

        iterations = 0
        deficit = target - total()
        while (
            constrained
            and abs(deficit) > REDISTRIBUTION_TOLERANCE
            and iterations < MAX_REDISTRIBUTION_ITERATIONS
        ):
            movable = [
                cid
                for cid in free
                if weights.get(cid, 0.0) > 0.0
                and ((deficit > 0 and values[cid] < 1.0) or (deficit < 0 and values[cid] > 0.0))
            ]
            if not movable:
                break
            iterations += 1
            movable_weight = sum(weights[cid] for cid in movable)
            delta = deficit / movable_weight
            for cid in movable:
                values[cid] = clamp01(values[cid] + delta)
            deficit = target - total()
        return [(cid, values[cid]) for cid in free], iterations, abs(deficit)

    # -- user-facing writes --------------------------------------------------

    def set_node_value(self, node_id: str, raw: float) -> SyncEvent:
        """Set a node from a raw (display-space) value and synchronize both
        directions. The set node itself is excluded from propagation."""
        node = self.node(node_id)
        if node.locked:
            raise LockedNodeError(f"node {node_id!r} is locked")
        event = SyncEvent(origin=node_id)
        node.interacting = True
        try:
            target = node.range.normalize(raw)
            current = node.value
            self._record_change(node, target, event, force=True)
            if node.children:
                finals, iterations, residual = self._solve_children(node, current, target)
                event.iterations = iterations
                event.residual = residual
                for child_id, new_value in finals:
                    if new_value != self.nodes[child_id].value:
                        self._propagate_down(child_id, new_value, event)
            parent = self._parents.get(node_id)
            if parent is not None:
                self.aggregate_up(parent, event)
        finally:
            node.interacting = False
        return event

    def apply_preset(self, node_id: str, label: str) -> SyncEvent:
        """Jump the node's children to a labeled preset coordinate set.

        Coordinates are raw values in each child's own range. Locked children
        stay put; the parent re-aggregates from what actually moved, and the
        residual reports the distance to the preset's intended parent value.
        """
        node = self.node(node_id)
        if label not in node.dropdown_presets:
            raise TreeError(f"node {node_id!r} has no preset {label!r}")
        coords = node.dropdown_presets[label]
        if not coords:
            return SyncEvent(origin=node_id)
        if set(coords) == {node_id}:
            # scalar preset on a leaf: identical to setting the value directly
            return self.set_node_value(node_id, coords[node_id])
        event = SyncEvent(origin=node_id)
        intended: dict[str, float] = {}
        for child_id, raw in coords.items():
            child = self.node(child_id)
            norm = child.range.normalize(raw)
            intended[child_id] = norm
            if child.locked or child.interacting:
                continue
            self._propagate_down(child_id, norm, event)
        if node.children:
            self.aggregate_up(node_id, event)
            target = sum(
                node.child_weights.get(cid, 0.0) * intended.get(cid, self.nodes[cid].value)
                for cid in node.children
            )
            event.residual = abs(self.weighted_sum(node_id) - target)
        return event

    def lock_node(self, node_id: str, locked: bool) -> None:
        self.node(node_id).locked = bool(locked)

    # -- plumbing ------------------------------------------------------------

    def _record_change(
        self, node: ControlNode, new_value: float, event: SyncEvent | None, force: bool = False
    ) -> None:
        new_value = clamp01(new_value)
        if (node.interacting or node.locked) and not force:
            return
        old = node.value
        if new_value == old and not force:
            return
        old_raw = node.range.denormalize(old)
        node.value = new_value
        new_raw = node.range.denormalize(new_value)
        if event is not None:
            event.changes.append(
                NodeChange(node_id=node.id, old=old, new=new_value, old_raw=old_raw, new_raw=new_raw)
            )
        if node.level == "technical":
            binding = self.panel.bindings.get(node.id)
            if binding is not None:
                if event is not None:
                    event.technical_writes.append((binding, new_raw))
                if self.write_through is not None:
                    self.write_through(binding, new_raw)

    def recompute_all(self) -> None:
        """Re-derive every internal node from its children, leaves upward."""
        def depth_first(node_id: str) -> None:
            node = self.nodes[node_id]
            for child in node.children:
                depth_first(child)
            if node.children:
                node.value = clamp01(self.weighted_sum(node_id))

        for root in self.panel.roots:
            depth_first(root)

    def values(self) -> dict[str, float]:
        return {nid: n.value for nid, n in self.nodes.items()}

    def raw_values(self) -> dict[str, float]:
        return {nid: n.raw_value for nid, n in self.nodes.items()}


# -- serialization ----------------------------------------------------------

def panel_to_dict(panel: PanelConfig) -> dict:
    return {
        "version": panel.version,
        "panel_name": panel.panel_name,
        "roots": list(panel.roots),
        "bindings": dict(panel.bindings),
        "nodes": {
            nid: {
                "id": n.id,
                "name": n.name,
                "level": n.level,
                "description": n.description,
                "range": {"min": n.range.min, "max": n.range.max},
                "value": n.value,
                "children": list(n.children),
                "child_weights": dict(n.child_weights),
                "step_labels": list(n.step_labels),
                "dropdown_presets": {k: dict(v) for k, v in n.dropdown_presets.items()},
                "locked": n.locked,
            }
            for nid, n in panel.nodes.items()
        },
    }


def panel_from_dict(doc: Mapping) -> PanelConfig:
    try:
        nodes = {
            nid: ControlNode(
                id=raw["id"],
                name=raw["name"],
                level=raw["level"],
                description=raw.get("description", ""),
                range=ControlRange(raw["range"]["min"], raw["range"]["max"]),
                value=float(raw["value"]),
                children=list(raw.get("children", [])),
                child_weights=dict(raw.get("child_weights", {})),
                step_labels=list(raw.get("step_labels", [])),
                dropdown_presets={k: dict(v) for k, v in raw.get("dropdown_presets", {}).items()},
                locked=bool(raw.get("locked", False)),
            )
            for nid, raw in doc["nodes"].items()
        }
        return PanelConfig(
            panel_name=doc["panel_name"],
            roots=list(doc["roots"]),
            nodes=nodes,
            bindings=dict(doc["bindings"]),
            version=str(doc.get("version", "1")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise TreeError(f"malformed panel document: {exc}") from exc
