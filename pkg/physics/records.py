# physics/records.py

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from configs.io_config import SERIES_COLUMNS, SCHEMA_VERSION
from physics.dynamics import SystemState
from physics.params import PhysicalParams


class ObservableSeries:
    """
    Time series of ObservableSample rows with the fixed CSV column order.
    """

    def __init__(self):
        self._rows: List[Dict[str, float]] = []

    def append(self, sample) -> None:
        self._rows.append(sample.as_dict())

    def __len__(self) -> int:
        return len(self._rows)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self._rows, columns=SERIES_COLUMNS, dtype=float)


def state_to_dict(state: SystemState) -> Dict[str, Any]:
    return {
        't': state.t,
        'alpha': [state.alpha.real, state.alpha.imag],
        'pos': state.pos.tolist(),
        'mom': state.mom.tolist(),
    }


def state_from_dict(payload: Dict[str, Any]) -> SystemState:
    return SystemState(
        t=payload['t'],
        alpha=complex(*payload['alpha']),
        pos=np.asarray(payload['pos'], dtype=float).reshape(-1, 2),
        mom=np.asarray(payload['mom'], dtype=float).reshape(-1, 2),
    )


@dataclass(eq=False)
class RunRecord:
    """
    One trajectory: parameter echo, integrator and init echo, seed and stream, observable series,
    final state and wall-clock metadata. The echo reproduces the run bit for bit.
    """
    params: PhysicalParams
    integrator: Dict[str, Any]
    init: Dict[str, Any]
    seed: int
    stream: int
    series: pd.DataFrame
    final_state: SystemState
    metadata: Dict[str, Any] = field(default_factory=dict)
    index: int = 0
    point: Dict[str, Any] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    @property
    def final_sample(self) -> Dict[str, float]:
        if self.series.empty:
            return {}
        return self.series.iloc[-1].to_dict()

    def final_summary(self) -> Dict[str, Any]:
        summary = dict(self.final_sample)
        summary['alpha_re'] = self.final_state.alpha.real
        summary['alpha_im'] = self.final_state.alpha.imag
        summary['n_atoms'] = self.final_state.n_atoms
        for column in ('defect_ratio', 'defect_ratio_2d'):
            if column in summary:
                summary[column.replace('ratio', 'count')] = summary[column] * self.final_state.n_atoms
        return summary

    def same_run_as(self, other: 'RunRecord', include_metadata: bool = False) -> bool:
        """Field-wise equality; wall-clock metadata is ignored unless asked for."""
        if not isinstance(other, RunRecord):
            return False
        same = (self.params == other.params
                and self.integrator == other.integrator
                and self.init == other.init
                and self.seed == other.seed
                and self.stream == other.stream
                and self.index == other.index
                and self.point == other.point
                and self.schema_version == other.schema_version
                and self.series.equals(other.series)
                and self.final_state.t == other.final_state.t
                and self.final_state.alpha == other.final_state.alpha
                and np.array_equal(self.final_state.pos, other.final_state.pos)
                and np.array_equal(self.final_state.mom, other.final_state.mom))
        if include_metadata:
            same = same and self.metadata == other.metadata
        return bool(same)


@dataclass(frozen=True)
class RunFailure:
    index: int
    point: Dict[str, Any]
    seed: int
    stream: int
    error: str
    t: Optional[float] = None
