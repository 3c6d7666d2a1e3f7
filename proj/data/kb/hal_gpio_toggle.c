void hal_gpio_toggle(uint32_t gpio_base, uint32_t pin_mask) {
    volatile uint32_t *GPIO_ODR = (uint32_t *)(gpio_base + 0x14);
    *GPIO_ODR ^= pin_mask;
}
