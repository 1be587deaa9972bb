import logging

from uabs.core import ActionNode

logger = logging.getLogger(__name__)

class ActionBase(ActionNode):
    pass

class ProcessActionBase(ActionBase):
    # long-running work, reports progress and messages;
    # callers (CLI, pool workers) may rebind `_progress` / `_message`
    def __init__(self, name: str = None, uuid: str = None) -> None:
        super().__init__(name, uuid)
        self._progress = lambda i, n: logger.debug("[%s]>Progress: %d/%d", self.name, i, n)
        self._message = logger.info

    def progress(self, i, n):
        self._progress(i, n)
    def message(self, s):
        self._message(f"[{self.name}]>{s}")

    def pre_run(self, *args, **kwargs):
        self.status = ActionNode.ActionStatus.CONFIGURED
        logger.debug("[%s]>Start", self.name)

    def post_run(self, *args, **kwargs):
        logger.debug("[%s]>Complete", self.name)

PAB = ProcessActionBase
