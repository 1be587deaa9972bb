from uabs.core import DataNode

r"""Concepts and principles

- Workable without any driver: data nodes are plain values passed to functions
- Member types are direct objects (positions as numpy arrays, enums as enums)
- Config nodes contain just basic elements (int/float/str/list/bool) and are
  strict: an unknown key is an error, not silently dropped
"""

class ConfigKeyError(KeyError):
    pass

class ConfigValueError(ValueError):
    pass

class DataBase(DataNode):
    pass

class ConfigBase(DataBase):
    # flat key-value nodes built from presets / user config files
    KEY_ALIASES: dict[str, str] = {} # file key -> attribute name

    @classmethod
    def Keys(cls) -> set[str]:
        return set(cls().get_construct_config()) | set(cls.KEY_ALIASES)

    def apply_construct_config(self, construct_config: dict):
        # all or nothing: a rejected update leaves the node as it was
        staged = {}
        for k, v in construct_config.items():
            attr = self.KEY_ALIASES.get(k, k)
            if attr.startswith("_") or attr=="name" or attr not in self.__dict__:
                raise ConfigKeyError(f"Unknown key '{k}' for {type(self).__name__}")
            staged[attr] = self._coerce(attr, v)

        previous = {attr: self.__dict__[attr] for attr in staged}
        self.__dict__.update(staged)
        self._hash = None
        try:
            self.validate()
        except Exception:
            self.__dict__.update(previous)
            raise

    def _coerce(self, attr: str, v):
        current = self.__dict__[attr]
        if isinstance(current, list) and not isinstance(v, list):
            raise ConfigValueError(f"Key '{attr}' expects a list, got {v!r}")
        if isinstance(current, bool) or current is None or isinstance(v, type(current)):
            return v
        try:
            if isinstance(current, float):
                return float(v)
            if isinstance(current, int):
                return int(v)
        except (TypeError, ValueError) as e:
            raise ConfigValueError(f"Key '{attr}' expects {type(current).__name__}, got {v!r}") from e
        return v

    @classmethod
    def FromConfig(cls, config: dict) -> "ConfigBase":
        node = cls()
        node.apply_construct_config({k: v for k, v in config.items() if k in cls.Keys()})
        return node

    def validate(self):
        ...
