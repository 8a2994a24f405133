// Browser entry point: same-origin service, panels wired on load.

import { initApp, wireControls } from "./main.js";

const app = initApp(document, window.location.origin);
wireControls(document, app);
