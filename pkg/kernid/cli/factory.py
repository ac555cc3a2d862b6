import os

from typing import Any, Dict, Optional, MutableMapping  # noqa

from kernid import constants
from kernid import documents
from kernid.config import Config, InvalidConfigError
from kernid.design import Design  # noqa
from kernid.gpfit import Dataset  # noqa
from kernid.kernels import MixedKernelSpec  # noqa
from kernid.report import Reporter, create_reporter
from kernid.utils import OSUtils, UI


# Newest config file version this release understands.
MAX_CONFIG_VERSION = 1.0


class CLIFactory(object):
    def __init__(self, project_dir, debug=False, environ=None,
                 config_path=None, global_params=None, osutils=None):
        # type: (str, bool, Optional[MutableMapping], Optional[str], Optional[Dict[str, Any]], Optional[OSUtils]) -> None
        self.project_dir = project_dir
        self.debug = debug
        if environ is None:
            environ = dict(os.environ)
        self._environ = environ
        self.config_path = config_path
        if global_params is None:
            global_params = {}
        self._global_params = global_params
        if osutils is None:
            osutils = OSUtils()
        self._osutils = osutils

    def create_config_obj(self, command=None, **user_params):
        # type: (Optional[str], **Any) -> Config
        user_provided_params = dict(
            (k, v) for k, v in self._global_params.items() if v is not None)
        user_provided_params.update(
            (k, v) for k, v in user_params.items() if v is not None)
        config_from_disk = self.load_project_config()
        self._validate_config_from_disk(config_from_disk)
        return Config(command=command,
                      user_provided_params=user_provided_params,
                      environ_params=self._environ_params(),
                      config_from_disk=config_from_disk)

    def _environ_params(self):
        # type: () -> Dict[str, Any]
        params = {}  # type: Dict[str, Any]
        threads = self._environ.get(constants.THREADS_ENV_VAR)
        if threads:
            params['threads'] = threads
        return params

    def _validate_config_from_disk(self, config):
        # type: (Dict[str, Any]) -> None
        string_version = config.get('version', constants.CONFIG_VERSION)
        try:
            version = float(string_version)
        except (TypeError, ValueError):
            raise InvalidConfigError('version', string_version,
                                     'unknown config file version')
        if version > MAX_CONFIG_VERSION:
            raise InvalidConfigError('version', string_version,
                                     'unknown config file version')
        commands = config.get('commands', {})
        if not isinstance(commands, dict):
            raise InvalidConfigError('commands', commands,
                                     'must be a mapping of command names')

    def load_project_config(self):
        # type: () -> Dict[str, Any]
        """Load the config file.

        An explicit ``--config`` path must exist.  Otherwise
        ``.kernid/config.json`` under the project directory is used when
        present.

        """
        if self.config_path is not None:
            return documents.read_document(self.config_path, self._osutils)
        default_path = os.path.join(self.project_dir,
                                    constants.DEFAULT_CONFIG_FILE)
        if not self._osutils.file_exists(default_path):
            return {}
        return documents.read_document(default_path, self._osutils)

    def create_ui(self):
        # type: () -> UI
        return UI()

    def create_reporter(self, config, ui=None):
        # type: (Config, Optional[UI]) -> Reporter
        if ui is None:
            ui = self.create_ui()
        return create_reporter(config.output_format, ui)

    def resolve_path(self, path):
        # type: (str) -> str
        if os.path.isabs(path):
            return path
        return os.path.join(self.project_dir, path)

    def load_design(self, path):
        # type: (str) -> Design
        return documents.load_design(self.resolve_path(path), self._osutils)

    def load_params(self, path):
        # type: (str) -> MixedKernelSpec
        return documents.load_params(self.resolve_path(path), self._osutils)

    def load_dataset(self, path):
        # type: (str) -> Dataset
        return documents.load_dataset(self.resolve_path(path),
                                      self._osutils)

    def write_document(self, path, doc):
        # type: (str, Dict[str, Any]) -> None
        documents.write_document(self.resolve_path(path), doc,
                                 self._osutils)

    def write_matrix(self, path, matrix):
        # type: (str, Any) -> None
        documents.write_matrix_csv(self.resolve_path(path), matrix,
                                   self._osutils)
