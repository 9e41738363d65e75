"""F_p 上的稀疏精确矩阵

行存储为 {列: 剩余类} 字典，只保存非零项。消元按行下标顺序处理，
主元取最小列，因此 RREF 与核基都是确定的（核基是规范的 RREF 核基：
每个基向量在一个自由列上取 1，在其它自由列上取 0）。
"""
import heapq
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime

from utils.errors import InvalidModulusError

SparseVector = Dict[int, int]

MAX_MODULUS = 2 ** 31


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    """校验模数为素数且可放进机器字，返回 p 本身"""
    if not isinstance(p, (int, np.integer)) or p < 2 or not isprime(int(p)):
        raise InvalidModulusError(p)
    if p > MAX_MODULUS:
        raise InvalidModulusError(p)
    return int(p)


def inv_modp(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("0 在 F_p 中没有逆元")
    return pow(a, p - 2, p)


def _reduce_row(row: SparseVector, pivots: Dict[int, SparseVector], p: int) -> SparseVector:
    """用已有主元行约化一行，返回约化后的行（可能为空）"""
    heap = list(row.keys())
    heapq.heapify(heap)
    while heap:
        c = heapq.heappop(heap)
        coeff = row.get(c)
        if coeff is None:
            continue
        piv = pivots.get(c)
        if piv is None:
            # 最小的非主元列：该行在这里有新主元，其余项留给最后的回代
            break
        del row[c]
        for c2, v in piv.items():
            if c2 == c:
                continue
            nv = (row.get(c2, 0) - coeff * v) % p
            if nv:
                if c2 not in row:
                    heapq.heappush(heap, c2)
                row[c2] = nv
            else:
                row.pop(c2, None)
    return row


def rref_from_row_dicts(rows: Iterable[Mapping[int, int]], p: int) -> Dict[int, SparseVector]:
    """
    稀疏行消元得到简化行阶梯形

    :param rows: 按行下标顺序给出的行字典
    :param p: 素数模
    :return: 主元列 → 规范化的主元行（主元系数为1，其它主元列上为0）
    """
    pivots: Dict[int, SparseVector] = {}
    for source in rows:
        row = {c: v % p for c, v in source.items() if v % p}
        if not row:
            continue
        row = _reduce_row(row, pivots, p)
        if not row:
            continue
        pivot_col = min(row)
        inv = inv_modp(row[pivot_col], p)
        pivots[pivot_col] = {c: (v * inv) % p for c, v in row.items()}

    # 回代：按主元列从大到小，把该列从主元更小的行里消去
    order = sorted(pivots)
    for idx in range(len(order) - 1, -1, -1):
        pc = order[idx]
        prow = pivots[pc]
        for other in order[:idx]:
            orow = pivots[other]
            coeff = orow.get(pc)
            if not coeff:
                continue
            for c, v in prow.items():
                nv = (orow.get(c, 0) - coeff * v) % p
                if nv:
                    orow[c] = nv
                else:
                    orow.pop(c, None)
    return pivots


def _dense_rref(a: np.ndarray, p: int) -> Tuple[List[int], np.ndarray]:
    """稠密回退路径：numpy 上的模 p 高斯-若尔当消元"""
    a = np.array(a, dtype=np.int64) % p
    n_rows, n_cols = a.shape
    pivot_cols: List[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * inv_modp(int(a[r, c]), p)) % p
        factors = a[:, c].copy()
        factors[r] = 0
        a = (a - np.outer(factors, a[r])) % p
        pivot_cols.append(c)
        r += 1
    return pivot_cols, a[:r]


def _kernel_from_pivots(pivots: Mapping[int, Mapping[int, int]], cols: int, p: int) -> List[SparseVector]:
    free = [c for c in range(cols) if c not in pivots]
    column_hits: Dict[int, List[Tuple[int, int]]] = {}
    for pc, prow in pivots.items():
        for c, v in prow.items():
            if c != pc:
                column_hits.setdefault(c, []).append((pc, v))
    basis = []
    for f in free:
        vec = {f: 1}
        for pc, v in column_hits.get(f, ()):
            vec[pc] = (-v) % p
        basis.append(vec)
    return basis


class FpMatrix:
    """F_p 上 rows × cols 的稀疏矩阵，构造后不可变"""

    __slots__ = ("p", "rows", "cols", "_data", "_rref")

    def __init__(self, p: int, rows: int, cols: int, entries: Optional[Mapping[Tuple[int, int], int]] = None):
        self.p = check_prime(p)
        if rows < 0 or cols < 0:
            raise ValueError(f"矩阵维数不能为负: {rows}×{cols}")
        self.rows = rows
        self.cols = cols
        self._data: Dict[int, SparseVector] = {}
        self._rref: Optional[Dict[int, SparseVector]] = None
        for (i, c), v in (entries or {}).items():
            self._set(i, c, v)

    def _set(self, i: int, c: int, v: int) -> None:
        if not (0 <= i < self.rows and 0 <= c < self.cols):
            raise IndexError(f"下标 ({i}, {c}) 超出 {self.rows}×{self.cols}")
        v %= self.p
        row = self._data.setdefault(i, {})
        if v:
            row[c] = v
        else:
            row.pop(c, None)
            if not row:
                del self._data[i]

    # ========== 构造 ==========

    @classmethod
    def from_row_dicts(cls, p: int, rows: int, cols: int, row_dicts) -> "FpMatrix":
        """从 {行: {列: 值}} 或按行排列的字典序列构造"""
        m = cls(p, rows, cols)
        items = row_dicts.items() if isinstance(row_dicts, Mapping) else enumerate(row_dicts)
        for i, row in items:
            for c, v in row.items():
                m._set(i, c, v)
        return m

    @classmethod
    def from_columns(cls, p: int, rows: int, columns: Sequence[Mapping[int, int]]) -> "FpMatrix":
        """以稀疏列向量为列构造矩阵"""
        m = cls(p, rows, len(columns))
        for c, col in enumerate(columns):
            for i, v in col.items():
                m._set(i, c, v)
        return m

    @classmethod
    def from_dense(cls, p: int, array) -> "FpMatrix":
        a = np.asarray(array, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError("稠密矩阵必须是二维的")
        m = cls(p, a.shape[0], a.shape[1])
        for i, c in zip(*np.nonzero(a % p)):
            m._set(int(i), int(c), int(a[i, c]))
        return m

    @classmethod
    def identity(cls, p: int, size: int) -> "FpMatrix":
        return cls(p, size, size, {(i, i): 1 for i in range(size)})

    @classmethod
    def zero(cls, p: int, rows: int, cols: int) -> "FpMatrix":
        return cls(p, rows, cols)

    @staticmethod
    def vstack(matrices: Sequence["FpMatrix"]) -> "FpMatrix":
        """纵向拼接（列数与模数必须一致）"""
        if not matrices:
            raise ValueError("vstack 需要至少一个矩阵")
        p, cols = matrices[0].p, matrices[0].cols
        data: Dict[int, SparseVector] = {}
        offset = 0
        for m in matrices:
            if m.p != p or m.cols != cols:
                raise ValueError(f"无法拼接: 期望 p={p}, cols={cols}，得到 p={m.p}, cols={m.cols}")
            for i, row in m._data.items():
                data[offset + i] = dict(row)
            offset += m.rows
        return FpMatrix.from_row_dicts(p, offset, cols, data)

    # ========== 访问 ==========

    @property
    def entries(self) -> Dict[Tuple[int, int], int]:
        return {(i, c): v for i, row in self._data.items() for c, v in row.items()}

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def get(self, i: int, c: int) -> int:
        return self._data.get(i, {}).get(c, 0)

    def row(self, i: int) -> SparseVector:
        return dict(self._data.get(i, {}))

    def row_dicts(self) -> Dict[int, SparseVector]:
        return {i: dict(row) for i, row in self._data.items()}

    def nnz(self) -> int:
        return sum(len(row) for row in self._data.values())

    def is_zero(self) -> bool:
        return not self._data

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.rows, self.cols), dtype=np.int64)
        for i, row in self._data.items():
            for c, v in row.items():
                a[i, c] = v
        return a

    # ========== 运算 ==========

    def transpose(self) -> "FpMatrix":
        return FpMatrix(self.p, self.cols, self.rows, {(c, i): v for (i, c), v in self.entries.items()})

    def apply(self, vector: Mapping[int, int]) -> SparseVector:
        """矩阵乘稀疏列向量"""
        out: SparseVector = {}
        p = self.p
        for i, row in self._data.items():
            acc = 0
            for c, v in row.items():
                x = vector.get(c)
                if x:
                    acc += v * x
            acc %= p
            if acc:
                out[i] = acc
        return out

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        if self.p != other.p or self.cols != other.rows:
            raise ValueError(f"无法相乘: {self.shape} @ {other.shape}")
        p = self.p
        data: Dict[int, SparseVector] = {}
        for i, row in self._data.items():
            acc: Dict[int, int] = {}
            for k, v in row.items():
                orow = other._data.get(k)
                if not orow:
                    continue
                for c, w in orow.items():
                    acc[c] = acc.get(c, 0) + v * w
            cleaned = {c: x % p for c, x in acc.items() if x % p}
            if cleaned:
                data[i] = cleaned
        return FpMatrix.from_row_dicts(p, self.rows, other.cols, data)

    def _combine(self, other: "FpMatrix", sign: int) -> "FpMatrix":
        if self.p != other.p or self.shape != other.shape:
            raise ValueError(f"维数不一致: {self.shape} 与 {other.shape}")
        entries = self.entries
        for key, v in other.entries.items():
            entries[key] = entries.get(key, 0) + sign * v
        return FpMatrix(self.p, self.rows, self.cols, entries)

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        return self._combine(other, -1)

    def scale(self, c: int) -> "FpMatrix":
        return FpMatrix(self.p, self.rows, self.cols, {key: v * c for key, v in self.entries.items()})

    def power(self, e: int) -> "FpMatrix":
        if self.rows != self.cols:
            raise ValueError("只有方阵才能求幂")
        result = FpMatrix.identity(self.p, self.rows)
        base = self
        while e > 0:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.p, self.rows, self.cols, frozenset(self.entries.items())))

    def __repr__(self) -> str:
        return f"FpMatrix(p={self.p}, {self.rows}×{self.cols}, nnz={self.nnz()})"

    # ========== 消元 ==========

    def rref(self) -> Dict[int, SparseVector]:
        """主元列 → 主元行（结果缓存，调用方不要修改）"""
        if self._rref is None:
            self._rref = rref_from_row_dicts((self._data[i] for i in sorted(self._data)), self.p)
        return self._rref

    def rank(self, method: str = "sparse") -> int:
        if method == "dense":
            if self.rows == 0 or self.cols == 0:
                return 0
            pivot_cols, _ = _dense_rref(self.to_dense(), self.p)
            return len(pivot_cols)
        if method != "sparse":
            raise ValueError(f"未知消元方法: {method}")
        return len(self.rref())

    def kernel_basis(self, method: str = "sparse") -> List[SparseVector]:
        """
        规范 RREF 核基

        :param method: sparse（默认）或 dense（numpy 回退路径）
        :return: 稀疏列向量列表，个数为 cols − rank
        """
        if method == "dense":
            if self.rows == 0:
                pivots: Dict[int, SparseVector] = {}
            else:
                pivot_cols, reduced = _dense_rref(self.to_dense(), self.p)
                pivots = {
                    pc: {int(c): int(reduced[i, c]) for c in np.nonzero(reduced[i])[0]}
                    for i, pc in enumerate(pivot_cols)
                }
            return _kernel_from_pivots(pivots, self.cols, self.p)
        if method != "sparse":
            raise ValueError(f"未知消元方法: {method}")
        return _kernel_from_pivots(self.rref(), self.cols, self.p)

    def kernel_free_columns(self) -> List[int]:
        """规范核基对应的自由列；子空间中向量的坐标就是它在这些列上的分量"""
        pivots = self.rref()
        return [c for c in range(self.cols) if c not in pivots]


def kernel_basis(m: FpMatrix, method: str = "sparse") -> List[SparseVector]:
    """ker(m) 的规范基"""
    return m.kernel_basis(method)


def rank(m: FpMatrix, method: str = "sparse") -> int:
    return m.rank(method)


def joint_kernel(
    operators: Sequence[FpMatrix], dim: Optional[int] = None, p: Optional[int] = None
) -> List[SparseVector]:
    """
    一族算子的公共核 ∩ ker(m_i)

    :param operators: 列数相同的矩阵
    :param dim: 空算子族时必须给出空间维数
    :param p: 空算子族时的模数（只用于校验）
    :return: 公共核的规范基；空算子族返回整个空间的标准基
    :raises ValueError: 列数或模数不一致
    """
    if not operators:
        if dim is None:
            raise ValueError("空算子族需要给出空间维数 dim")
        if p is not None:
            check_prime(p)
        return [{i: 1} for i in range(dim)]
    cols = operators[0].cols
    if dim is not None and dim != cols:
        raise ValueError(f"算子列数 {cols} 与空间维数 {dim} 不一致")
    return FpMatrix.vstack(list(operators)).kernel_basis()


def span_rank(p: int, dim: int, vectors: Iterable[Mapping[int, int]]) -> int:
    """一组稀疏向量张成子空间的维数"""
    return len(rref_from_row_dicts(vectors, check_prime(p)))
