import { ApiClient } from "./api.js";
import { mountStudio } from "./app.js";

window.addEventListener("DOMContentLoaded", () => {
  const root = document.getElementById("studio");
  if (!root) throw new Error("missing #studio mount point");
  const base = root.dataset.apiBase ?? "";
  mountStudio(root, new ApiClient(base));
});
