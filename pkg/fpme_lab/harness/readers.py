import configparser
import json
import os
from dataclasses import dataclass, field
from io import IOBase
from pathlib import Path
from typing import Callable, Generic, Iterable, Optional, Type, TypeVar

from fpme_lab.errors import ConfigurationError
from fpme_lab.utils import AttrDict, field_required

__all__ = [
    "FileLocator",
    "FileReader",
    "ConfigParser",
    "ValueInterpolation",
    "ini_reader",
    "json_reader",
    "default_search_paths",
]

DT = TypeVar("DT")  # Document type.


def default_search_paths() -> list:
    return [Path.cwd()]


@dataclass(frozen=True)
class FileLocator:
    """
    Locates experiment files by dotted name.

    FileLocator(extension)

    A dotted name such as `configs.hydro_default` is read as the relative
    path configs/hydro_default.<extension> and searched for on each search
    path in turn. Anything that already names an existing file is used as is.
    """

    extension: str

    def find_path(self, name: str, search_paths: Iterable[Path]) -> Optional[Path]:
        rel_file_path = Path(name.replace(".", "/") + "." + self.extension)

        for path in search_paths:
            abs_file_path = Path(path) / rel_file_path
            if abs_file_path.is_file():
                return abs_file_path

        return None

    def locate(self, name, search_paths: Iterable[Path] = None) -> Path:
        direct = Path(os.fspath(name))
        if direct.is_file():
            return direct

        found = self.find_path(str(name), search_paths or default_search_paths())
        if found is None:
            raise ConfigurationError("config", f"no .{self.extension} file found for '{name}'")
        return found


@dataclass(frozen=True)
class FileReader(Generic[DT]):
    """
    Reads a located file into a fresh document object.

    FileReader(
        locator=locator,
        document_type=cls,
        document_type_kwargs=kwargs,
        read_document=func,
    )

    Creates an empty document by calling cls(**kwargs) and fills it by calling
    func(document, file). The file is closed once func returns.
    """

    locator: FileLocator = field(default_factory=field_required)
    document_type: Type[DT] = field(default_factory=field_required)
    document_type_kwargs: dict = field(default_factory=dict)
    read_document: Callable[[DT, IOBase], None] = field(default_factory=field_required)

    def load(self, name, search_paths: Iterable[Path] = None) -> DT:
        path = self.locator.locate(name, search_paths)
        document = self.document_type(**self.document_type_kwargs)

        with path.open() as file:
            self.read_document(document, file)

        return document


class ConfigParser(configparser.ConfigParser, AttrDict):
    """
    ConfigParser allowing attribute notation for sections. Option names keep
    their case, so `T` and `t` are different keys.

    For section names that clash with ConfigParser attributes, the ConfigParser
    version is used. For example, a section called `items`.
    """

    def optionxform(self, optionstr: str) -> str:
        return optionstr


def _coerce(text: str, parser: configparser.ConfigParser):
    for func in [int, float, parser._convert_to_boolean]:
        try:
            return func(text)
        except ValueError:
            pass

    return text


class ValueInterpolation(configparser.Interpolation):
    """
    Converts values as they are read: integers, floats and booleans become
    Python values, and comma-separated values become lists of such values.
    """

    def before_read(self, parser, section, option, value):
        if "," in value:
            return [_coerce(item.strip(), parser) for item in value.split(",") if item.strip()]

        return _coerce(value, parser)


ini_reader = FileReader[ConfigParser](
    locator=FileLocator(extension="ini"),
    document_type=ConfigParser,
    document_type_kwargs={"interpolation": ValueInterpolation()},
    read_document=lambda document, file: document.read_file(file),
)

json_reader = FileReader[dict](
    locator=FileLocator(extension="json"),
    document_type=dict,
    read_document=lambda document, file: document.update(json.load(file)),
)
