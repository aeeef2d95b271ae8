import os
from typing import Literal, Optional

import chardet
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr

from utils.error.errors import SourceNotFound

MAX_FILE_SIZE = 4 * 1024 * 1024

SuffixCategory = Literal["poset", "report", "dot", "default"]


class PosetFile(BaseModel):
    """
    工作台读写的本地文件，按后缀推断类别
    """

    path: str = Field(..., description="本地路径")
    category: SuffixCategory = Field(default="default", description="文件类别")
    _text: Optional[str] = PrivateAttr(default=None)
    model_config = ConfigDict(frozen=False)

    def model_post_init(self, __context) -> None:
        if self.category == "default":
            self.category, _ = infer_file_category(self.path)

    @property
    def exists(self) -> bool:
        return os.path.exists(self.path)


def infer_file_category(path: str) -> tuple[str, str]:
    """
    根据后缀判断文件类别

    Return:
        - 分类: poset, report, dot, default
        - 后缀: .poset
    """
    _, ext_with_dot = os.path.splitext(os.path.basename(path))
    if not ext_with_dot:
        return "default", ""

    ext = ext_with_dot.lstrip(".").lower()
    TYPE_MAPPING = {
        "poset": {"poset", "space", "dsl", "txt"},
        "report": {"json", "jsonl"},
        "dot": {"dot", "gv"},
    }
    for category, extensions in TYPE_MAPPING.items():
        if ext in extensions:
            return category, ext_with_dot
    return "default", ext_with_dot


class FileOps:
    @staticmethod
    def read_bytes(file_obj: PosetFile) -> bytes:
        """读取原始内容，超过大小限制抛异常"""
        if not file_obj.exists:
            raise SourceNotFound(file_obj.path)
        size = os.path.getsize(file_obj.path)
        if size > MAX_FILE_SIZE:
            raise ValueError(f"文件大小 ({size} bytes) 超过限制 {MAX_FILE_SIZE} bytes")
        with open(file_obj.path, "rb") as f:
            return f.read()

    @staticmethod
    def read_text(file_obj: PosetFile) -> str:
        """读取文本：先试 UTF-8，失败时用 chardet 猜编码"""
        if file_obj._text is not None:
            return file_obj._text
        content = FileOps.read_bytes(file_obj)
        try:
            text = content.decode("utf-8")
        except UnicodeDecodeError:
            charset = chardet.detect(content)
            text = content.decode(charset.get("encoding") or "utf-8")
        if text.startswith("\ufeff"):
            text = text[1:]
        file_obj._text = text
        return text

    @staticmethod
    def write_text(file_obj: PosetFile, text: str) -> str:
        directory = os.path.dirname(file_obj.path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(file_obj.path, "w", encoding="utf-8") as f:
            f.write(text)
        file_obj._text = text
        return file_obj.path


__all__ = ["PosetFile", "FileOps", "infer_file_category", "MAX_FILE_SIZE"]
