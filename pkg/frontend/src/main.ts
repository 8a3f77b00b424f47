import { ApiClient } from "./api";
import { mountApp } from "./app";

// Served from the same origin as the API (the service mounts this bundle
// under /ui), so the client talks to the root path.
const client = new ApiClient("");

const root = document.querySelector<HTMLElement>("#app");
if (root === null) throw new Error("missing #app mount point");

function boot(): void {
  mountApp(root as HTMLElement, client).catch((err: unknown) => {
    const banner = document.createElement("div");
    banner.className = "error-banner";
    banner.textContent = String(err);
    (root as HTMLElement).replaceChildren(banner);
  });
}

window.addEventListener("hashchange", boot);
boot();
