// Browser entry point: mount the explorer on the page against the same
// origin that served it.

import { ApiClient } from "./api.js";
import { createExplorer } from "./app.js";

const root = document.getElementById("app");
if (root === null) {
  throw new Error("missing #app container");
}
createExplorer(root, new ApiClient());
