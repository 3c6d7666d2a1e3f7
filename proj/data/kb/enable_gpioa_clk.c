void enable_gpioa_clk(void) {
    volatile uint32_t *RCC_AHB1ENR = (uint32_t *)(RCC_BASE + RCC_AHB1ENR_OFFSET);
    *RCC_AHB1ENR |= 0x1;
}
