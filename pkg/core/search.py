from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime
from fractions import Fraction
import json
import logging
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import dask.bag as db

from config.settings import settings
from core.errors import NonPrimitiveEntryError, PipedError
from core.exactmath import divisors_of_square, exact_sqrt
from core.families import FamilyId, evaluate
from core.piped import (
    MonoclinicPiped,
    canonicalize,
    is_primitive_canonical,
    is_realizable,
    primitive_reduce,
    verify_equations,
)
from core.validity import Classification, classify

logger = logging.getLogger(__name__)

BRUTEFORCE = "bruteforce"


@dataclass(frozen=True)
class CatalogEntry:
    """One piped found by a scan or by the oracle, with its primitive canonical form"""
    family: str
    m: Optional[int]
    n: Optional[int]
    raw: MonoclinicPiped
    primitive: MonoclinicPiped
    content: int

    @property
    def key(self) -> Tuple[int, ...]:
        return self.primitive.as_tuple()


@dataclass(frozen=True)
class CoverageMatch:
    primitive: MonoclinicPiped
    family: str
    m: Optional[int]
    n: Optional[int]


@dataclass
class CoverageReport:
    matched: List[CoverageMatch] = field(default_factory=list)
    unmatched_bruteforce: List[CatalogEntry] = field(default_factory=list)
    parameters: Dict = field(default_factory=dict)

    def summary(self) -> str:
        return f"{len(self.matched)} matched, {len(self.unmatched_bruteforce)} unmatched"


def build_entry(family: str, m: Optional[int], n: Optional[int], raw: MonoclinicPiped) -> CatalogEntry:
    primitive, content = primitive_reduce(raw)
    return CatalogEntry(family=family, m=m, n=n, raw=raw,
                        primitive=canonicalize(primitive), content=content)


# ============================================================================
# Brute-force oracle
# ============================================================================

def pythagorean_legs(x: int) -> Dict[int, int]:
    """
    Every leg y > 0 with x^2 + y^2 a square, mapped to its hypotenuse.
    Uses r * s = x^2 with r < s of equal parity: y = (s - r)/2, h = (s + r)/2.
    """
    square = x * x
    legs = {}
    for r in divisors_of_square(x):
        s = square // r
        if r >= s:
            break
        if (s - r) % 2 == 0:
            legs[(s - r) // 2] = (s + r) // 2
    return legs


def complete_edge(x: int) -> List[CatalogEntry]:
    """All pipeds with edge x whose lengths come from the legs of x"""
    legs = pythagorean_legs(x)
    ordered = sorted(legs)
    found = []
    for i, y in enumerate(ordered):
        for z in ordered[i:]:
            low, high = abs(y - z), y + z
            twice_faces = 2 * y * y + 2 * z * z
            for c1 in ordered:
                if c1 <= low:
                    continue
                if c1 >= high:
                    break
                c2 = exact_sqrt(twice_faces - c1 * c1)
                if c2 is None or c2 == c1 or c2 not in legs:
                    continue
                raw = MonoclinicPiped(x, y, z, legs[y], legs[z], c1, c2, legs[c1], legs[c2])
                found.append(build_entry(BRUTEFORCE, None, None, raw))
    return _dedup_by_primitive(sorted(found, key=lambda e: e.key))


def _dedup_by_primitive(entries: Iterable[CatalogEntry]) -> List[CatalogEntry]:
    seen = set()
    unique = []
    for entry in entries:
        if entry.key in seen:
            continue
        seen.add(entry.key)
        unique.append(entry)
    return unique


def _representatives(entries: Iterable[CatalogEntry]) -> List[CatalogEntry]:
    """
    One scan entry per primitive, ordered by (n, m). Distinct ratios can give
    the same shape (P1 at m/n and n/(2m), for one); the ratio closest to zero
    represents them.
    """
    chosen: Dict[Tuple[int, ...], CatalogEntry] = {}
    for entry in entries:
        rank = (Fraction(abs(entry.m), entry.n), entry.n, entry.m)
        current = chosen.get(entry.key)
        if current is None or rank < (Fraction(abs(current.m), current.n), current.n, current.m):
            chosen[entry.key] = entry
    return sorted(chosen.values(), key=lambda e: (e.n, e.m))


def _chunks(values: Sequence[int], size: int) -> List[List[int]]:
    size = max(1, size)
    return [list(values[i:i + size]) for i in range(0, len(values), size)]


class ScanEngine:
    """
    Runs family scans and the brute-force oracle over chunked parameter space
    Features:
    - Thread pool or dask.bag execution over disjoint chunks
    - Deterministic merge: sort on the declared order, then dedup by primitive
    - Per-run metrics and an execution log
    """

    def __init__(self, threads: Optional[int] = None, use_dask: Optional[bool] = None,
                 chunk_size: Optional[int] = None):
        self.threads = max(1, threads or settings.MAX_WORKERS)
        self.use_dask = settings.ENABLE_DASK if use_dask is None else use_dask
        self.chunk_size = chunk_size or settings.SCAN_CHUNK_SIZE
        self.execution_log = []
        self.metrics = self._fresh_metrics()

    @staticmethod
    def _fresh_metrics() -> Dict:
        return {
            'pairs_tried': 0,
            'valid': 0,
            'not_realizable': 0,
            'unique_primitives': 0,
            'chunks': 0,
            'start_time': None,
            'end_time': None,
        }

    def _run_chunks(self, worker, chunks: List[List[int]]) -> List[list]:
        """Results per chunk, in chunk order whichever executor ran them"""
        self.metrics['chunks'] += len(chunks)
        if not chunks:
            return []
        if self.use_dask:
            bag = db.from_sequence(chunks, npartitions=len(chunks))
            return bag.map(worker).compute(scheduler="threads", num_workers=self.threads)
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            return list(executor.map(worker, chunks))

    # ------------------------------------------------------------------
    # Family scans
    # ------------------------------------------------------------------

    def scan_family(self, family_id, height: int) -> List[CatalogEntry]:
        if height < 1:
            raise ValueError(f"height must be at least 1, got {height}")
        fid = FamilyId.parse(family_id)
        self.metrics = self._fresh_metrics()
        self.metrics['start_time'] = datetime.now()
        logger.info(f"Starting scan: {fid.value} at height {height}")

        def worker(n_values: List[int]) -> Tuple[int, int, List[CatalogEntry]]:
            return self._scan_chunk(fid, height, n_values)

        try:
            results = self._run_chunks(worker, _chunks(range(1, height + 1), self.chunk_size))
            entries = []
            for tried, rejected, chunk_entries in results:
                self.metrics['pairs_tried'] += tried
                self.metrics['not_realizable'] += rejected
                entries.extend(chunk_entries)
            self.metrics['valid'] = len(entries) + self.metrics['not_realizable']
            if self.metrics['not_realizable']:
                logger.warning(f"{fid.value}: {self.metrics['not_realizable']} in-range pairs "
                               f"gave pipeds that are not realizable and were dropped")
            unique = _representatives(entries)
            self.metrics['unique_primitives'] = len(unique)
            self.metrics['end_time'] = datetime.now()
            self._log_execution(f"scan {fid.value} height={height}", 'SUCCESS')
            return unique
        except Exception as e:
            logger.error(f"Scan of {fid.value} failed: {e}")
            self.metrics['end_time'] = datetime.now()
            self._log_execution(f"scan {fid.value} height={height}", 'FAILED', str(e))
            raise

    @staticmethod
    def _scan_chunk(fid: FamilyId, height: int, n_values: List[int]) -> Tuple[int, int, List[CatalogEntry]]:
        """(pairs tried, in-range pairs dropped as not realizable, entries)"""
        tried = rejected = 0
        entries = []
        for n in n_values:
            for m in range(-height, height + 1):
                if gcd(m, n) != 1:
                    continue
                tried += 1
                if classify(fid, m, n) is not Classification.VALID:
                    continue
                raw = evaluate(fid, m, n)
                if not verify_equations(raw).all_pass:
                    raise PipedError(f"{fid.value}({m}, {n}) violates equations "
                                     f"{verify_equations(raw).failed_equations()}")
                entry = build_entry(fid.value, m, n, raw)
                # the printed P3 ranges overshoot into a non-realizable band near m/n = -1
                if not is_realizable(entry.primitive):
                    logger.debug(f"{fid.value}({m}, {n}) is in range but not realizable")
                    rejected += 1
                    continue
                entries.append(entry)
        return tried, rejected, entries

    # ------------------------------------------------------------------
    # Oracle
    # ------------------------------------------------------------------

    def brute_force(self, x_max: int) -> List[CatalogEntry]:
        if x_max < 1:
            raise ValueError(f"x_max must be at least 1, got {x_max}")
        self.metrics = self._fresh_metrics()
        self.metrics['start_time'] = datetime.now()
        logger.info(f"Starting brute-force search up to x = {x_max}")

        def worker(xs: List[int]) -> List[CatalogEntry]:
            found = []
            for x in xs:
                found.extend(complete_edge(x))
            return found

        results = self._run_chunks(worker, _chunks(range(1, x_max + 1), self.chunk_size))
        entries = [entry for chunk in results for entry in chunk]
        self.metrics['pairs_tried'] = x_max
        self.metrics['valid'] = len(entries)
        unique = _dedup_by_primitive(sorted(entries, key=lambda e: e.key))
        self.metrics['unique_primitives'] = len(unique)
        self.metrics['end_time'] = datetime.now()
        self._log_execution(f"bruteforce x_max={x_max}", 'SUCCESS')
        return unique

    def complete_edge(self, x: int) -> List[CatalogEntry]:
        if x < 1:
            raise ValueError(f"edge must be positive, got {x}")
        self.metrics = self._fresh_metrics()
        self.metrics['start_time'] = datetime.now()
        entries = complete_edge(x)
        self.metrics['pairs_tried'] = 1
        self.metrics['valid'] = self.metrics['unique_primitives'] = len(entries)
        self.metrics['end_time'] = datetime.now()
        self._log_execution(f"complete edge x={x}", 'SUCCESS')
        return entries

    def _log_execution(self, operation: str, status: str, error: str = None):
        log_entry = {
            'timestamp': datetime.now().isoformat(),
            'operation': operation,
            'status': status,
            'pairs_tried': self.metrics['pairs_tried'],
            'valid': self.metrics['valid'],
            'not_realizable': self.metrics['not_realizable'],
            'unique_primitives': self.metrics['unique_primitives'],
            'chunks': self.metrics['chunks'],
            'duration_seconds': (self.metrics['end_time'] - self.metrics['start_time']).total_seconds() if self.metrics['end_time'] else 0,
            'error': error,
        }
        self.execution_log.append(log_entry)
        logger.debug(f"Execution logged: {json.dumps(log_entry)}")

    def get_execution_report(self) -> Dict:
        return {
            'metrics': self.metrics,
            'execution_log': self.execution_log,
        }


def scan_family(family_id, height: int, threads: Optional[int] = None,
                use_dask: Optional[bool] = None) -> List[CatalogEntry]:
    return ScanEngine(threads=threads, use_dask=use_dask).scan_family(family_id, height)


def brute_force(x_max: int, threads: Optional[int] = None) -> List[CatalogEntry]:
    return ScanEngine(threads=threads).brute_force(x_max)


# ============================================================================
# Coverage
# ============================================================================

def _require_primitive(entries: Iterable[CatalogEntry], role: str):
    for entry in entries:
        if not is_primitive_canonical(entry.primitive):
            raise NonPrimitiveEntryError(f"{role} entry {entry.primitive.as_tuple()} is not primitive and canonical")


def coverage(oracle: List[CatalogEntry], scans: List[CatalogEntry]) -> CoverageReport:
    """Partition oracle entries by whether some scan entry has the same primitive"""
    _require_primitive(oracle, "oracle")
    _require_primitive(scans, "scan")

    provenance: Dict[Tuple[int, ...], CatalogEntry] = {}
    for entry in scans:
        provenance.setdefault(entry.key, entry)

    report = CoverageReport(parameters={
        'oracle_entries': len(oracle),
        'scan_entries': len(scans),
        'families': sorted({e.family for e in scans}),
        'max_height': max((max(abs(e.m), abs(e.n)) for e in scans if e.m is not None), default=0),
    })
    for entry in oracle:
        source = provenance.get(entry.key)
        if source is None:
            report.unmatched_bruteforce.append(entry)
        else:
            report.matched.append(CoverageMatch(entry.primitive, source.family, source.m, source.n))
    logger.info(f"Coverage: {report.summary()}")
    return report
