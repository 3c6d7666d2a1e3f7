uint32_t hal_gpio_read(uint32_t gpio_base, uint32_t pin_mask) {
    volatile uint32_t *GPIO_IDR = (uint32_t *)(gpio_base + 0x10);
    if ((*GPIO_IDR & pin_mask) != 0) {
        return 1;
    }
    return 0;
}
