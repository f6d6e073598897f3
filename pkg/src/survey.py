"""
Exhaustive uniqueness sweeps over every HP string of one length

Chain index i maps to labels in binary-counter order with H=0 and P=1, the
most significant bit being node 0. The index space is cut into contiguous
blocks; each finished block is one checkpoint record.

Checkpoint file (little endian):

    header  16 bytes  magic b'HPCK' | version u16 | n u8 | mode u8 | cursor u64
    record  20 bytes  start u64 | length u32 | unique u32 | crc32 u32

mode bit 0 is set for closed chains and bit 1 when chain symmetries are
quotiented; a checkpoint only resumes a sweep with the same mode. cursor
is the end of the longest run of finished blocks starting at index 0; the
sweep is complete when it equals 2^n. The crc covers the first 16 bytes
of its record. The file is rewritten whole (temp file, then os.replace).
"""
import csv
import json
import logging
import os
import struct
import time
import zlib
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, TextIO, Tuple, Union

from .config import ENGINE_VERSION, Settings, get_settings
from .core import Chain, InvalidChainError, Topology, as_topology
from .families import FamilyParameterError, gen_Z
from .search import SearchLimitError, SearchOptions, enumerate_optimal, is_unique

logger = logging.getLogger(__name__)

MAGIC = b'HPCK'
FORMAT_VERSION = 1
HEADER = struct.Struct('<4sHBBQ')
RECORD = struct.Struct('<QIII')
DETAIL_MAX_N = 14

_CLOSED_BIT = 0x01
_QUOTIENT_BIT = 0x02


def _mode(topology: Topology, quotient: bool) -> int:
    return (_CLOSED_BIT if topology is Topology.CLOSED else 0) | (_QUOTIENT_BIT if quotient else 0)


def _describe_mode(mode: int) -> str:
    topology = 'closed' if mode & _CLOSED_BIT else 'open'
    reading = 'chain symmetries quotiented' if mode & _QUOTIENT_BIT else 'isometries only'
    return f"{topology}, {reading}"


class CheckpointError(RuntimeError):
    """Raised when a checkpoint file is corrupt or belongs to another sweep"""


def chain_for_index(index: int, n: int, topology: Union[Topology, str] = Topology.OPEN) -> Chain:
    """Labels of the index-th chain in binary-counter order (H=0, P=1)"""
    if not 0 <= index < 2 ** n:
        raise ValueError(f"Index {index} out of range for n={n}")
    labels = ''.join('P' if index >> (n - 1 - p) & 1 else 'H' for p in range(n))
    return Chain(labels, as_topology(topology))


def index_for_chain(chain: Chain) -> int:
    return int(chain.labels.replace('H', '0').replace('P', '1'), 2)


@dataclass(frozen=True)
class BlockRecord:
    start: int
    length: int
    unique: int

    @property
    def end(self) -> int:
        return self.start + self.length


def contiguous_cursor(records: List[BlockRecord]) -> int:
    cursor = 0
    for r in sorted(records, key=lambda r: r.start):
        if r.start != cursor:
            break
        cursor = r.end
    return cursor


def missing_blocks(total: int, records: List[BlockRecord], block_size: int) -> List[Tuple[int, int]]:
    """Unfinished (start, length) blocks covering [0, total)"""
    blocks = []
    position = 0
    for r in sorted(records, key=lambda r: r.start) + [BlockRecord(total, 0, 0)]:
        while position < r.start:
            length = min(block_size, r.start - position)
            blocks.append((position, length))
            position += length
        position = max(position, r.end)
    return blocks


class SurveyCheckpoint:
    """Reader/writer for one sweep's checkpoint file"""

    def __init__(self, path: Union[str, Path], n: int, topology: Union[Topology, str],
                 quotient_chain_automorphisms: bool = True):
        self.path = Path(path)
        self.n = n
        self.topology = as_topology(topology)
        self.mode = _mode(self.topology, quotient_chain_automorphisms)

    def load(self) -> List[BlockRecord]:
        """
        Read and validate finished blocks; a missing file means a fresh sweep

        Raises:
            CheckpointError: On any structural or consistency problem
        """
        if not self.path.exists():
            return []
        data = self.path.read_bytes()
        if len(data) < HEADER.size:
            raise CheckpointError(f"{self.path}: truncated header ({len(data)} bytes)")
        magic, version, n, mode, cursor = HEADER.unpack_from(data, 0)
        if magic != MAGIC:
            raise CheckpointError(f"{self.path}: bad magic {magic!r}")
        if version != FORMAT_VERSION:
            raise CheckpointError(f"{self.path}: unsupported version {version}")
        if n != self.n or mode != self.mode:
            raise CheckpointError(
                f"{self.path}: checkpoint is for n={n} ({_describe_mode(mode)}), "
                f"not n={self.n} ({_describe_mode(self.mode)})"
            )
        body = data[HEADER.size:]
        if len(body) % RECORD.size:
            raise CheckpointError(f"{self.path}: body size {len(body)} is not a whole number of records")

        total = 2 ** self.n
        records = []
        for offset in range(0, len(body), RECORD.size):
            start, length, unique, crc = RECORD.unpack_from(body, offset)
            if zlib.crc32(body[offset:offset + RECORD.size - 4]) != crc:
                raise CheckpointError(f"{self.path}: checksum mismatch in record at byte {HEADER.size + offset}")
            if length == 0 or start + length > total or unique > length:
                raise CheckpointError(
                    f"{self.path}: record (start={start}, length={length}, unique={unique}) out of range"
                )
            records.append(BlockRecord(start, length, unique))

        records.sort(key=lambda r: r.start)
        for prev, cur in zip(records, records[1:]):
            if cur.start < prev.end:
                raise CheckpointError(f"{self.path}: overlapping blocks at index {cur.start}")
        if cursor != contiguous_cursor(records):
            raise CheckpointError(
                f"{self.path}: header cursor {cursor} does not match records ({contiguous_cursor(records)})"
            )
        return records

    def save(self, records: List[BlockRecord]) -> None:
        records = sorted(records, key=lambda r: r.start)
        parts = [HEADER.pack(MAGIC, FORMAT_VERSION, self.n, self.mode,
                             contiguous_cursor(records))]
        for r in records:
            head = struct.pack('<QII', r.start, r.length, r.unique)
            parts.append(head + struct.pack('<I', zlib.crc32(head)))
        tmp = self.path.with_name(self.path.name + '.tmp')
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(tmp, 'wb') as f:
            f.write(b''.join(parts))
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, self.path)


@dataclass
class SurveyRecord:
    """Tallies of one sweep (complete or partial)"""
    n: int
    topology: str
    unique_count: int
    total_count: int
    engine_version: str = ENGINE_VERSION
    elapsed: float = 0.0
    cursor: int = 0
    quotient_chain_automorphisms: bool = True

    @property
    def expected_total(self) -> int:
        return 2 ** self.n

    @property
    def complete(self) -> bool:
        return self.total_count == self.expected_total

    @property
    def percentage(self) -> float:
        if self.total_count == 0:
            return 0.0
        return 100.0 * self.unique_count / self.total_count

    def to_dict(self) -> Dict:
        data = asdict(self)
        data['percentage'] = round(self.percentage, 6)
        data['complete'] = self.complete
        data['elapsed'] = round(self.elapsed, 3)
        return data

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def get_summary(self) -> str:
        status = "complete" if self.complete else f"partial (cursor {self.cursor})"
        classes = "isometries and chain symmetries" if self.quotient_chain_automorphisms else "isometries only"
        return "\n".join([
            "=" * 60,
            f"SURVEY n={self.n} ({self.topology})",
            "=" * 60,
            f"Classes modulo: {classes}",
            f"Unique optimal folding: {self.unique_count} of {self.total_count} ({self.percentage:.3f}%)",
            f"Status: {status}",
            f"Elapsed: {self.elapsed:.2f} seconds",
            "=" * 60,
        ])


DetailRow = Tuple[int, str, int, int]


def _sweep_block(n: int, topology: str, start: int, length: int, quotient: bool,
                 detail: bool) -> Tuple[int, int, int, List[DetailRow]]:
    """Worker entry point; module level so it pickles"""
    options = SearchOptions(
        store_limit=0,
        quotient_chain_automorphisms=quotient,
        class_limit=None if detail else 2,
    )
    unique = 0
    rows: List[DetailRow] = []
    for index in range(start, start + length):
        chain = chain_for_index(index, n, topology)
        result = enumerate_optimal(chain, options)
        if result.class_count == 1:
            unique += 1
        if detail:
            rows.append((index, chain.labels, result.optimum, result.class_count))
    return start, length, unique, rows


def _write_detail_rows(f: TextIO, n: int, rows: List[DetailRow]) -> None:
    writer = csv.writer(f)
    writer.writerow(['n', 'chain', 'optimum', 'class_count'])
    for _, labels, optimum, class_count in sorted(rows):
        writer.writerow([n, labels, optimum, class_count])


def write_detail_csv(target: Union[str, Path, TextIO], n: int, rows: List[DetailRow]) -> None:
    """CSV with columns n, chain, optimum, class_count, in index order, to a path or open stream"""
    if hasattr(target, 'write'):
        _write_detail_rows(target, n, rows)
        return
    with open(target, 'w', newline='') as f:
        _write_detail_rows(f, n, rows)


def sweep(
    n: int,
    topology: Union[Topology, str] = Topology.OPEN,
    workers: Optional[int] = None,
    checkpoint: Optional[Union[str, Path]] = None,
    block_size: Optional[int] = None,
    checkpoint_every: Optional[int] = None,
    detail_csv: Optional[Union[str, Path, TextIO]] = None,
    quotient_chain_automorphisms: bool = True,
    block_limit: Optional[int] = None,
    progress_callback: Optional[Callable[[int, int], None]] = None,
    settings: Optional[Settings] = None,
) -> SurveyRecord:
    """
    Count chains of length n with exactly one optimal folding class

    Args:
        n: Chain length
        topology: 'open' or 'closed'
        workers: Process count (1 runs inline)
        checkpoint: Checkpoint path; an existing file is resumed
        block_size: Chains per block
        checkpoint_every: Finished blocks between checkpoint rewrites
        detail_csv: Optional CSV path or stream of per-chain results
            (n <= 14, fresh sweeps only)
        quotient_chain_automorphisms: Count foldings related by a chain symmetry
            as one class (default); False counts lattice isometries only
        block_limit: Stop after this many blocks (leaves a resumable checkpoint)
        progress_callback: Optional callback(chains_done, chains_total)
        settings: Defaults for the optional sizes

    Returns:
        SurveyRecord; complete unless block_limit stopped it early

    Raises:
        InvalidChainError: For n < 1, or a closed sweep with odd n or n < 4
        SearchLimitError: If n exceeds settings.survey_max_n
        CheckpointError: If the checkpoint is corrupt or for another sweep
        ValueError: If detail output is requested for n > 14 or a resumed sweep
    """
    settings = settings or get_settings()
    topology = as_topology(topology)
    if n < 1:
        raise InvalidChainError(f"Chain length must be positive, got {n}")
    if topology is Topology.CLOSED and (n < 4 or n % 2):
        raise InvalidChainError(f"Closed chains need an even length of at least 4, got {n}")
    if n > settings.survey_max_n:
        raise SearchLimitError(f"n={n} exceeds the survey limit of {settings.survey_max_n}")
    workers = workers or settings.workers
    block_size = block_size or settings.block_size
    checkpoint_every = checkpoint_every or settings.checkpoint_every
    if detail_csv is not None and n > DETAIL_MAX_N:
        raise ValueError(f"Detail output is limited to n <= {DETAIL_MAX_N}, got {n}")

    started = time.time()
    total = 2 ** n
    store = SurveyCheckpoint(checkpoint, n, topology, quotient_chain_automorphisms) if checkpoint else None
    records = store.load() if store else []
    if records and detail_csv is not None:
        raise ValueError("Detail output needs a fresh sweep, but the checkpoint already has finished blocks")
    if records:
        logger.info("Resuming n=%d from %d finished blocks", n, len(records))

    blocks = missing_blocks(total, records, block_size)
    if block_limit is not None:
        blocks = blocks[:block_limit]
    rows: List[DetailRow] = []
    done = sum(r.length for r in records)
    pending = 0

    def finish(start: int, length: int, unique: int, block_rows: List[DetailRow]) -> None:
        nonlocal done, pending
        records.append(BlockRecord(start, length, unique))
        rows.extend(block_rows)
        done += length
        pending += 1
        if store and pending >= checkpoint_every:
            store.save(records)
            pending = 0
        if progress_callback:
            progress_callback(done, total)

    args = (n, topology.value)
    detail = detail_csv is not None
    if workers <= 1 or len(blocks) <= 1:
        for start, length in blocks:
            finish(*_sweep_block(*args, start, length, quotient_chain_automorphisms, detail))
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [
                executor.submit(_sweep_block, *args, start, length, quotient_chain_automorphisms, detail)
                for start, length in blocks
            ]
            for future in as_completed(futures):
                finish(*future.result())

    if store:
        store.save(records)
    if detail:
        write_detail_csv(detail_csv, n, rows)

    record = SurveyRecord(
        n=n,
        topology=topology.value,
        unique_count=sum(r.unique for r in records),
        total_count=sum(r.length for r in records),
        elapsed=time.time() - started,
        cursor=contiguous_cursor(records),
        quotient_chain_automorphisms=quotient_chain_automorphisms,
    )
    logger.info("n=%d: %d/%d unique", n, record.unique_count, record.total_count)
    return record


def find_unique_examples(n: int, limit: int = 1, topology: Union[Topology, str] = Topology.OPEN,
                         quotient_chain_automorphisms: bool = True,
                         settings: Optional[Settings] = None) -> List[Chain]:
    """
    First chains of length n, in binary-counter order, with a unique optimal folding

    Returns:
        Up to `limit` chains; empty when none exist or limit < 1

    Raises:
        SearchLimitError: If n exceeds settings.survey_max_n
    """
    settings = settings or get_settings()
    if n > settings.survey_max_n:
        raise SearchLimitError(f"n={n} exceeds the survey limit of {settings.survey_max_n}")
    if limit < 1:
        return []
    options = SearchOptions(store_limit=0, quotient_chain_automorphisms=quotient_chain_automorphisms)
    found: List[Chain] = []
    for index in range(2 ** n):
        chain = chain_for_index(index, n, topology)
        if is_unique(chain, options):
            found.append(chain)
            if len(found) >= limit:
                break
    return found


def verify_odd_Z(k_max: int, quotient_chain_automorphisms: bool = True) -> List[Tuple[int, int]]:
    """
    Optimal class counts of Z_k for odd k from 1 to k_max

    Raises:
        FamilyParameterError: If k_max is not a positive odd integer
    """
    if not isinstance(k_max, int) or k_max < 1 or k_max % 2 == 0:
        raise FamilyParameterError(f"k_max must be a positive odd integer, got {k_max!r}")
    options = SearchOptions(store_limit=0, quotient_chain_automorphisms=quotient_chain_automorphisms)
    table = []
    for k in range(1, k_max + 1, 2):
        result = enumerate_optimal(gen_Z(k), options)
        logger.info("Z_%d: optimum=%d classes=%d", k, result.optimum, result.class_count)
        table.append((k, result.class_count))
    return table
