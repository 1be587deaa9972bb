from enum import Enum

from uabs.core.data import ConfigBase, ConfigValueError
from uabs.modules.policy import PolicyParams
from uabs.modules.reinforce import Episode

class ArchiveError(Exception):
    pass

class ArchiveVersionError(ArchiveError):
    pass

class ArchiveTruncatedError(ArchiveError):
    pass

class ArchiveChecksumError(ArchiveError):
    pass

class ArchiveCorruptionError(ArchiveError):
    # archived data violating its own invariants, e.g. a zero behavior probability
    pass

class EmptyExperienceError(ValueError):
    pass

class ContinualConstraintError(RuntimeError):
    # a previous task's simulator was touched outside its own episodes
    pass

class MetaGradMode(Enum):
    FirstOrder = "first_order"
    FiniteDifference = "finite_difference"

class MetaConfig(ConfigBase):
    def __init__(self, name: str = None, uuid: str = None, kappa: float=0.0001, eta: float=0.001, gamma: float=0.8,
                 B: int=5, I_meta: int=100, ratio_clip: float=10.0, meta_grad_mode: str="first_order") -> None:
        super().__init__(name, uuid)
        self.kappa = kappa
        self.eta = eta
        self.gamma = gamma
        self.B = B
        self.I_meta = I_meta
        self.ratio_clip = ratio_clip
        self.meta_grad_mode = meta_grad_mode
        self.validate()

    @property
    def mode(self) -> MetaGradMode:
        return MetaGradMode(self.meta_grad_mode)

    def validate(self):
        if self.kappa<0 or self.eta<0:
            raise ConfigValueError("kappa and eta must be >= 0")
        if self.B<1 or self.I_meta<0:
            raise ConfigValueError("B must be >= 1 and I_meta >= 0")
        if not self.ratio_clip>=1:
            raise ConfigValueError(f"ratio_clip must be >= 1, got {self.ratio_clip}")
        try:
            self.mode
        except ValueError as e:
            raise ConfigValueError(f"Unknown meta_grad_mode '{self.meta_grad_mode}'") from e

class TaskArchiveEntry:
    def __init__(self, task_index: int, full_set: list[Episode], skilled_index: int):
        if not full_set:
            raise EmptyExperienceError(f"Task {task_index} has no episodes")
        if not 0<=skilled_index<len(full_set):
            raise ArchiveCorruptionError(f"Skilled index {skilled_index} outside {len(full_set)} episodes")
        self.task_index = task_index
        self.full_set = full_set
        self.skilled_index = skilled_index

    @property
    def skilled(self) -> Episode:
        return self.full_set[self.skilled_index]

    def __eq__(self, other):
        return isinstance(other, TaskArchiveEntry) and \
            (self.task_index, self.skilled_index)==(other.task_index, other.skilled_index) and \
            len(self.full_set)==len(other.full_set) and \
            all(a==b for a, b in zip(self.full_set, other.full_set))

class MetaState:
    def __init__(self, theta0: PolicyParams, archive: list[TaskArchiveEntry]=None):
        self.theta0 = theta0
        self.archive = list(archive or []) # append-only

    @property
    def i(self) -> int:
        return len(self.archive)

    def __eq__(self, other):
        return isinstance(other, MetaState) and self.theta0==other.theta0 and self.archive==other.archive
