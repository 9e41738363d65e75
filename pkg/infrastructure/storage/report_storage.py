"""报告存储实现"""
import json
import os
import sys
from typing import Any, Dict, List, Optional

from config.constants import Constants
from interface.report_storage import IReportStorage
from utils.errors import ReportWriteError

# 表格中按这个顺序显示列，其余键忽略
_TABLE_COLUMNS = ("label", "kind", "indices", "frobenius_level", "twist", "multiplicity", "flag", "verdict")
_TABLE_KEYS = ("entries", "catalog")


def _cell(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return ",".join(str(v) for v in value)
    if value is None:
        return "-"
    return str(value)


def _table(rows: List[Dict]) -> List[str]:
    columns = [c for c in _TABLE_COLUMNS if any(c in row for row in rows)]
    cells = [[_cell(row.get(c)) for c in columns] for row in rows]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(widths[i]) for i, c in enumerate(columns))]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(r[i].ljust(widths[i]) for i in range(len(columns))) for r in cells)
    return lines


class FileReportStorage(IReportStorage):
    """把报告写到文件或 stdout"""

    def __init__(self, report_dir: Optional[str] = None):
        """
        :param report_dir: 相对路径的基准目录，None 表示当前目录
        """
        self.report_dir = report_dir

    def to_json(self, report: Dict) -> str:
        return json.dumps(report, indent=Constants.JSON_INDENT, ensure_ascii=False, sort_keys=False)

    def to_text(self, report: Dict) -> str:
        lines: List[str] = []
        tables: List[str] = []
        for key, value in report.items():
            if key in _TABLE_KEYS and isinstance(value, list) and value and isinstance(value[0], dict):
                tables.append(key)
            elif isinstance(value, dict):
                lines.append(f"{key}:")
                lines.extend(f"  {k} = {_cell(v)}" for k, v in value.items())
            elif isinstance(value, list) and value and isinstance(value[0], dict):
                lines.append(f"{key}:")
                lines.extend("  " + json.dumps(v, ensure_ascii=False) for v in value)
            elif key == "notes" and isinstance(value, list):
                lines.extend(f"note: {note}" for note in value)
            else:
                lines.append(f"{key}: {_cell(value)}")
        for key in tables:
            lines.append("")
            lines.extend(_table(report[key]))
        return "\n".join(lines) + "\n"

    def save_report(self, report: Dict, path: Optional[str] = None, output_format: str = "text") -> str:
        if output_format not in Constants.OUTPUT_FORMATS:
            raise ValueError(f"未知输出格式: {output_format}")
        text = self.to_json(report) + "\n" if output_format == "json" else self.to_text(report)

        if path is None:
            sys.stdout.write(text)
            return text

        if self.report_dir and not os.path.isabs(path):
            path = os.path.join(self.report_dir, path)
        try:
            os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
            with open(path, "w", encoding="utf-8") as f:
                f.write(text)
        except OSError as e:
            raise ReportWriteError(f"报告无法写入 {path}: {e}") from e
        return text

    def load_report(self, path: str) -> Dict:
        if not os.path.exists(path):
            raise FileNotFoundError(f"报告文件不存在: {path}")

        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
