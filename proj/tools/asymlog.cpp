// SPDX-License-Identifier: Apache-2.0
// placeholder main; the full CLI lands with the cli module
int main() { return 0; }
