import { mount } from "./app.js";

mount("#app").catch((err) => {
  const root = document.querySelector("#app");
  if (root) {
    root.textContent = `Failed to start: ${String(err)}. Is the API server running?`;
  }
});
